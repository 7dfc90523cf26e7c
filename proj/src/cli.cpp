#include "swpk/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "swpk/admissibility.hpp"
#include "swpk/error.hpp"
#include "swpk/io.hpp"
#include "swpk/kernel.hpp"
#include "swpk/operators.hpp"
#include "swpk/solver.hpp"
#include "swpk/verifier.hpp"

namespace swpk {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> d = {
      {"params.n", ""},
      {"params.p", ""},
      {"params.gamma", ""},
      {"params.alpha", "0"},
      {"params.beta", "0"},
      {"params.p0", ""},
      {"params.q0", ""},
      {"params.kind", "DoubleWeighted"},
      {"grid.r_min", "1e-4"},
      {"grid.r_max", "1e4"},
      {"grid.t_min", ""},  // defaults to r_min
      {"grid.t_max", ""},  // defaults to r_max
      {"grid.nodes_per_decade", "64"},
      {"grid.tol", "1e-10"},
      {"solver.mode", "extremal"},
      {"solver.max_iters", "400"},
      {"solver.tol_J", "1e-10"},
      {"solver.tol_res", "1e-6"},
      {"solver.scale_fix", "HalfMassRadius"},
      {"solver.init", "PowerLawBump"},
      {"solver.init_file", ""},
      {"io.input", ""},
      {"io.direction", "V"},
      {"io.out", "out"},
      {"io.seed", "1"},
      {"io.workers", "1"},
      {"verify.suite", "scaling,inequality,lorentz,asymptotics,decay,pohozaev,hardy,mass"},
      {"verify.trials", "100"},
      {"verify.f_star", ""},
      {"verify.g_star", ""},
      {"hardy.radii", "0.5,1,2,4"},
  };
  return d;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    RunConfig tmp;
    tmp.values["x"] = item;
    out.push_back(tmp.number("x"));
  }
  return out;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.text("io.out")) / name).string();
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  j["command"] = cfg.command;
  for (const auto& [k, v] : cfg.values) j[k] = v;
  return j;
}

json params_json(const Params& p) {
  return json{{"n", p.n},          {"p", p.p},       {"qprime", p.qprime}, {"alpha", p.alpha}, {"beta", p.beta},
              {"gamma", p.gamma},  {"q", p.q},       {"pprime", p.pprime}, {"s_kernel", p.s_kernel}};
}

json report_json(const AdmissibilityReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"name", c.name}, {"statement", c.statement}, {"slack", c.slack}, {"pass", c.pass}});
  return json{{"overall_pass", r.overall_pass}, {"conditions", conds}};
}

json record_json(const VerificationRecord& r) {
  return json{{"name", r.name},
              {"inputs", r.inputs},
              {"measured", r.measured},
              {"reference", r.reference},
              {"relative_gap", r.relative_gap},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"skipped", r.skipped},
              {"note", r.note}};
}

json kernel_json(const OperatorContext& ctx) {
  const LatticeKernel& K = ctx.kernel;
  return json{{"entries", K.entries},
              {"adaptive_entries", K.adaptive_entries},
              {"failed_entries", K.failed_entries},
              {"max_rel_error", K.max_rel_error}};
}

json trunc_json(const TruncationDiag& d) { return json{{"inner", d.inner}, {"outer", d.outer}}; }

json solve_report_json(const SolveReport& r) {
  return json{{"C_est", r.C_est},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"stationarity", r.stationarity},
              {"scale_shift", r.scale_shift},
              {"el_residual", {r.el_residual[0], r.el_residual[1]}},
              {"truncation_boundary", trunc_json(r.truncation_boundary)},
              {"truncation_interior", trunc_json(r.truncation_interior)},
              {"J_history", r.J_history}};
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& name, const json& j) {
  const std::string text = j.dump(2) + "\n";
  atomic_write(out_path(cfg, name), text);
  out << text;
}

Params config_params(const RunConfig& cfg) {
  return derive_exponents(cfg.integer("params.n"), cfg.number("params.p"), cfg.number("params.gamma"),
                          cfg.number("params.alpha"), cfg.number("params.beta"));
}

SystemExponents config_system(const RunConfig& cfg) {
  SystemExponents s;
  s.n = cfg.integer("params.n");
  s.gamma = cfg.number("params.gamma");
  s.alpha = cfg.number("params.alpha");
  s.beta = cfg.number("params.beta");
  s.p0 = cfg.number("params.p0");
  s.q0 = cfg.number("params.q0");
  s.kind = parse_system_kind(cfg.text("params.kind"));
  return s;
}

bool system_mode(const RunConfig& cfg) {
  const std::string mode = cfg.text("solver.mode");
  if (mode != "extremal" && mode != "system") throw Error(Errc::ParseError, "solver.mode must be extremal or system");
  return mode == "system";
}

OperatorContext config_context(const RunConfig& cfg, const Params& params) {
  const double r_min = cfg.number("grid.r_min"), r_max = cfg.number("grid.r_max");
  const double t_min = cfg.has("grid.t_min") ? cfg.number("grid.t_min") : r_min;
  const double t_max = cfg.has("grid.t_max") ? cfg.number("grid.t_max") : r_max;
  const int npd = cfg.integer("grid.nodes_per_decade");
  return make_operator_context(params, r_min, r_max, t_min, t_max, npd, cfg.number("grid.tol"),
                               cfg.integer("io.workers"));
}

SolveOptions config_solve_options(const RunConfig& cfg, const OperatorContext& ctx) {
  SolveOptions o;
  o.max_iters = cfg.integer("solver.max_iters");
  o.tol_J = cfg.number("solver.tol_J");
  o.tol_res = cfg.number("solver.tol_res");
  o.scale_fix = parse_scale_fix(cfg.text("solver.scale_fix"));
  o.init = parse_init_kind(cfg.text("solver.init"));
  if (o.init == InitKind::FromFile) {
    auto prof = parse_profile_csv(read_file(cfg.text("solver.init_file")));
    if (!std::holds_alternative<BoundaryProfile>(prof)) throw Error(Errc::ParseError, "init file is not a boundary profile");
    BoundaryProfile f = std::get<BoundaryProfile>(prof);
    if (!same_grid(f.grid, ctx.boundary)) throw Error(Errc::GridMismatch, "init profile is not on the boundary grid");
    f.grid = ctx.boundary;
    o.init_profile = f;
  }
  return o;
}

// Extremal or system solve per the config; the pair and exponents used downstream.
struct Solved {
  SystemExponents sys;
  BoundaryProfile u;
  HalfSpaceProfile v;
  SolveReport report;
  bool system = false;
};

Solved run_solver(const RunConfig& cfg, const OperatorContext& ctx) {
  Solved s;
  const SolveOptions opts = config_solve_options(cfg, ctx);
  if (system_mode(cfg)) {
    s.system = true;
    s.sys = config_system(cfg);
    SystemSolution sol = solve_system(s.sys, ctx, opts);
    s.u = std::move(sol.u);
    s.v = std::move(sol.v);
    s.report = std::move(sol.report);
  } else {
    s.report = solve_extremal(ctx, opts);
    s.sys = system_from_params(ctx.params);
    SystemSolution sol = extremal_to_system(s.report.f_star, s.report.g_star, s.report.C_est, s.sys);
    s.u = std::move(sol.u);
    s.v = std::move(sol.v);
  }
  return s;
}

VerificationRecord skipped(const std::string& name, const std::string& why) {
  VerificationRecord r;
  r.name = name;
  r.skipped = true;
  r.pass = true;
  r.note = why;
  return r;
}

}  // namespace

bool RunConfig::has(const std::string& key) const {
  const auto it = values.find(key);
  return it != values.end() && !it->second.empty();
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end() || it->second.empty()) throw Error(Errc::ParseError, "missing required key " + key);
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  const std::string& s = text(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, key + " is not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error(Errc::ParseError, key + " is not a finite number: '" + s + "'");
  return v;
}

int RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(Errc::ParseError, key + " must be an integer");
  return static_cast<int>(v);
}

RunConfig make_run_config(const std::string& command, const std::string& file_text,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  cfg.command = command;
  for (const auto& [k, v] : defaults()) cfg.values[k] = v;
  auto set = [&](std::string key, const std::string& value) {
    if (key.find('.') == std::string::npos) key = "params." + key;
    if (!cfg.values.count(key)) throw Error(Errc::ParseError, "unknown config key " + key);
    cfg.values[key] = value;
  };
  for (const auto& [k, v] : parse_config_text(file_text)) set(k, v);
  for (const auto& [k, v] : overrides) set(k, v);
  return cfg;
}

std::string config_text(const RunConfig& cfg) {
  std::string s;
  for (const auto& [k, v] : cfg.values) s += k + "=" + v + "\n";
  return s;
}

int cmd_check_params(const RunConfig& cfg, std::ostream& out) {
  json j;
  j["config"] = config_json(cfg);
  bool pass = false;
  if (system_mode(cfg)) {
    const SystemExponents sys = config_system(cfg);
    const AdmissibilityReport rep = check_system(sys);
    const AsymptoticFlags fl = check_asymptotic_hypothesis(sys);
    j["system"] = {{"kind", system_kind_name(sys.kind)}, {"p0", sys.p0}, {"q0", sys.q0}};
    j["report"] = report_json(rep);
    j["asymptotics"] = {{"boundary_ok", fl.boundary_ok}, {"interior_ok", fl.interior_ok}};
    pass = rep.overall_pass;
  } else {
    const Params p = config_params(cfg);
    const AdmissibilityReport rep = check_admissible(p);
    j["params"] = params_json(p);
    j["report"] = report_json(rep);
    pass = rep.overall_pass;
  }
  emit(cfg, out, "check_params.json", j);
  return pass ? kExitPass : kExitFail;
}

int cmd_apply(const RunConfig& cfg, std::ostream& out) {
  const Params params = system_mode(cfg) ? params_for_system(config_system(cfg)) : config_params(cfg);
  const AnyProfile input = parse_profile_csv(read_file(cfg.text("io.input")));
  const std::string dir = cfg.text("io.direction");
  if (dir != "V" && dir != "W") throw Error(Errc::ParseError, "io.direction must be V or W");
  const bool forward = dir == "V";
  if (forward != std::holds_alternative<BoundaryProfile>(input))
    throw Error(Errc::ParseError, "direction " + dir + " does not match the input profile kind");
  const OperatorContext ctx = config_context(cfg, params);

  json j;
  j["config"] = config_json(cfg);
  j["params"] = params_json(params);
  j["kernel"] = kernel_json(ctx);
  json d;
  if (forward) {
    BoundaryProfile f = std::get<BoundaryProfile>(input);
    if (f.n != params.n || !same_grid(f.grid, ctx.boundary)) throw Error(Errc::GridMismatch, "input grid differs");
    f.grid = ctx.boundary;
    const HalfSpaceProfile g = apply_V(f, ctx);
    const double a = interior_inner(g, g, ctx), b = boundary_inner(f, apply_W(g, ctx), ctx);
    d["input_norm_p"] = boundary_norm(f, params.p);
    d["image_norm_q"] = halfspace_norm(g, params.q);
    d["truncation_input"] = trunc_json(truncation_diag(f, params.p));
    d["truncation_image"] = trunc_json(truncation_diag(g, params.q));
    d["adjoint_gap"] = std::max(std::abs(a), std::abs(b)) > 0 ? std::abs(a - b) / std::max(std::abs(a), std::abs(b)) : 0.0;
    d["corner_value"] = g.values.front();
    if (params.gamma < 3.0 && params.alpha == 0.0 && params.beta == 0.0) {
      const double m = kernel_mass(ctx.t.front(), params.gamma, params.n);
      d["corner_kernel_mass"] = m;
      d["corner_ratio"] = g.values.front() / m;
    }
    atomic_write(out_path(cfg, "image.csv"), halfspace_csv(g));
  } else {
    HalfSpaceProfile g = std::get<HalfSpaceProfile>(input);
    if (g.n != params.n || !same_grid(g.rho_grid, ctx.rho) || !same_grid(g.t_grid, ctx.t))
      throw Error(Errc::GridMismatch, "input grids differ");
    g.rho_grid = ctx.rho;
    g.t_grid = ctx.t;
    const BoundaryProfile f = apply_W(g, ctx);
    const double a = boundary_inner(f, f, ctx), b = interior_inner(g, apply_V(f, ctx), ctx);
    d["input_norm_qprime"] = halfspace_norm(g, params.qprime);
    d["image_norm_pprime"] = boundary_norm(f, params.pprime);
    d["truncation_input"] = trunc_json(truncation_diag(g, params.qprime));
    d["truncation_image"] = trunc_json(truncation_diag(f, params.pprime));
    d["adjoint_gap"] = std::max(std::abs(a), std::abs(b)) > 0 ? std::abs(a - b) / std::max(std::abs(a), std::abs(b)) : 0.0;
    atomic_write(out_path(cfg, "image.csv"), boundary_csv(f));
  }
  j["diagnostics"] = d;
  j["outputs"] = {{"image", "image.csv"}};
  emit(cfg, out, "apply.json", j);
  return kExitPass;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const bool sysm = system_mode(cfg);
  if (sysm) {
    const SystemExponents sys = config_system(cfg);
    if (!check_system(sys).overall_pass) throw Error(Errc::PreconditionError, "system exponents fail check_system");
  }
  const Params params = sysm ? params_for_system(config_system(cfg)) : config_params(cfg);
  const OperatorContext ctx = config_context(cfg, params);
  const Solved s = run_solver(cfg, ctx);

  json j;
  j["config"] = config_json(cfg);
  j["params"] = params_json(params);
  j["kernel"] = kernel_json(ctx);
  j["mode"] = sysm ? "system" : "extremal";
  j["report"] = solve_report_json(s.report);
  if (sysm) {
    atomic_write(out_path(cfg, "u.csv"), boundary_csv(s.u));
    atomic_write(out_path(cfg, "v.csv"), halfspace_csv(s.v));
    j["outputs"] = {{"u", "u.csv"}, {"v", "v.csv"}};
  } else {
    atomic_write(out_path(cfg, "f_star.csv"), boundary_csv(s.report.f_star));
    atomic_write(out_path(cfg, "g_star.csv"), halfspace_csv(s.report.g_star));
    j["outputs"] = {{"f_star", "f_star.csv"}, {"g_star", "g_star.csv"}};
  }
  emit(cfg, out, "solve.json", j);
  return s.report.converged ? kExitPass : kExitFail;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  static const std::vector<std::string> known = {"scaling", "inequality", "lorentz", "asymptotics",
                                                 "decay",   "pohozaev",   "hardy",   "mass"};
  const auto suites = split_list(cfg.text("verify.suite"));
  for (const auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end()) throw Error(Errc::ParseError, "unknown suite " + s);
  auto wants = [&](const char* s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };

  const bool sysm = system_mode(cfg);
  const Params params = sysm ? params_for_system(config_system(cfg)) : config_params(cfg);
  const bool needs_ctx = wants("scaling") || wants("inequality") || wants("lorentz") || wants("asymptotics") ||
                         wants("decay") || wants("pohozaev");
  const bool needs_solve = wants("inequality") || wants("lorentz") || wants("asymptotics") || wants("decay") ||
                           wants("pohozaev");

  std::vector<VerificationRecord> recs;
  json j;
  j["config"] = config_json(cfg);
  j["params"] = params_json(params);
  if (needs_ctx) {
    const OperatorContext ctx = config_context(cfg, params);
    j["kernel"] = kernel_json(ctx);
    Solved s;
    if (needs_solve) {
      if (cfg.has("verify.f_star") && !sysm) {
        // Reuse a prior extremal solve.
        auto pf = parse_profile_csv(read_file(cfg.text("verify.f_star")));
        if (!std::holds_alternative<BoundaryProfile>(pf)) throw Error(Errc::ParseError, "verify.f_star is not a boundary profile");
        BoundaryProfile f = std::get<BoundaryProfile>(pf);
        if (!same_grid(f.grid, ctx.boundary)) throw Error(Errc::GridMismatch, "verify.f_star grid differs");
        f.grid = ctx.boundary;
        f.decreasing = true;
        for (double& x : f.values) x /= boundary_norm(f, params.p);
        s.report.g_star = optimal_g(f, ctx);
        s.report.C_est = functional_J(f, s.report.g_star, ctx);
        s.report.f_star = std::move(f);
        s.report.converged = true;
        s.sys = system_from_params(params);
        SystemSolution sol = extremal_to_system(s.report.f_star, s.report.g_star, s.report.C_est, s.sys);
        s.u = std::move(sol.u);
        s.v = std::move(sol.v);
      } else {
        s = run_solver(cfg, ctx);
      }
      j["solve"] = {{"mode", s.system ? "system" : "extremal"},
                    {"C_est", s.report.C_est},
                    {"converged", s.report.converged},
                    {"iterations", s.report.iterations},
                    {"el_residual", {s.report.el_residual[0], s.report.el_residual[1]}}};
    }
    if (wants("scaling")) {
      const BoundaryProfile f = make_boundary_profile(ctx.boundary, params.n, [](double r) { return std::exp(-r * r); });
      const double lams[] = {0.25, 0.5, 2.0, 4.0};
      recs.push_back(verify_scaling(f, lams, ctx));
    }
    if (wants("inequality")) {
      if (s.system) recs.push_back(skipped("inequality", "needs an extremal solve (solver.mode=extremal)"));
      else recs.push_back(verify_inequality(ctx, cfg.integer("verify.trials"),
                                            static_cast<std::uint64_t>(cfg.integer("io.seed")), s.report.C_est));
    }
    if (wants("lorentz")) {
      if (s.system) {
        recs.push_back(skipped("lorentz", "needs an extremal solve (solver.mode=extremal)"));
      } else {
        std::vector<BoundaryProfile> fam{s.report.f_star};
        for (double R : {0.1, 1.0, 10.0, 100.0})
          fam.push_back(make_boundary_profile(ctx.boundary, params.n, [R](double r) { return r <= R ? 1.0 : 0.0; }));
        recs.push_back(lorentz_probe(ctx, fam, s.report.C_est));
      }
    }
    if (wants("asymptotics")) {
      auto [b, i] = verify_asymptotics(s.u, s.v, s.sys, ctx);
      recs.push_back(b);
      recs.push_back(i);
    }
    if (wants("decay")) {
      try {
        recs.push_back(regularity_window_check(s.u, s.v, s.sys));
      } catch (const Error& e) {
        if (e.code() != Errc::InsufficientSupport && e.code() != Errc::DomainError) throw;
        recs.push_back(skipped("regularity_window", std::string(errc_name(e.code())) + ": " + e.what()));
      }
    }
    if (wants("pohozaev")) {
      if (s.sys.kind != SystemKind::SingleWeighted || !check_system(s.sys).overall_pass) {
        recs.push_back(skipped("pohozaev", "needs a SingleWeighted system passing check_system"));
      } else {
        const PohozaevRecords pz = verify_pohozaev(s.u, s.v, s.sys, ctx);
        recs.push_back(pz.identity);
        recs.push_back(pz.balance);
        recs.push_back(pz.energy);
      }
    }
  }
  if (wants("hardy")) recs.push_back(verify_hardy(params, number_list(cfg.text("hardy.radii"))));
  if (wants("mass")) {
    if (params.gamma >= 3.0) {
      recs.push_back(skipped("mass", "kernel mass is infinite for gamma >= 3"));
    } else {
      const double rhos[] = {0.01, 0.1, 1.0}, ts[] = {0.1, 1.0, 10.0};
      recs.push_back(verify_kernel_mass(params.n, params.gamma, rhos, ts, 1e-4, 1e4, 64));
    }
  }

  bool all = true;
  json arr = json::array();
  for (const auto& r : recs) {
    all = all && r.pass;
    arr.push_back(record_json(r));
  }
  j["records"] = arr;
  j["all_pass"] = all;
  emit(cfg, out, "verify.json", j);
  return all ? kExitPass : kExitFail;
}

int cmd_hardy(const RunConfig& cfg, std::ostream& out) {
  const Params params = config_params(cfg);
  const auto radii = number_list(cfg.text("hardy.radii"));
  json rows = json::array();
  for (const auto& h : hardy_products(params, radii)) rows.push_back({{"R", h.R}, {"A0_factor", h.a0}, {"A1_factor", h.a1}});
  const VerificationRecord rec = verify_hardy(params, radii);
  json j;
  j["config"] = config_json(cfg);
  j["params"] = params_json(params);
  j["rows"] = rows;
  j["record"] = record_json(rec);
  emit(cfg, out, "hardy.json", j);
  return rec.pass ? kExitPass : kExitFail;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "check-params") return cmd_check_params(cfg, out);
    if (cfg.command == "apply") return cmd_apply(cfg, out);
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "hardy") return cmd_hardy(cfg, out);
    err << "unknown command " << cfg.command << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case Errc::NotConverged:
      case Errc::ZeroImage:
      case Errc::QuadratureFailure:
      case Errc::InsufficientSupport:
        return kExitFail;
      default:
        return kExitConfig;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace swpk
