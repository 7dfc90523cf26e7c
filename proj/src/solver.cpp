#include "swpk/solver.hpp"

#include <algorithm>
#include <cmath>

#include "swpk/error.hpp"

namespace swpk {

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double rel_sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  const double s = sup_abs(b);
  return s > 0.0 ? d / s : (d > 0.0 ? kInf : 0.0);
}

void power_in_place(std::vector<double>& v, double e) {
  for (double& x : v) x = x > 0.0 ? std::pow(x, e) : 0.0;
}

void scale_in_place(std::vector<double>& v, double c) {
  for (double& x : v) x *= c;
}

bool all_zero(const std::vector<double>& v) {
  return std::none_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

// g = V^{q-1} normalized in L^{q'}.
HalfSpaceProfile g_from_image(HalfSpaceProfile V, double q, double qprime) {
  if (all_zero(V.values)) throw Error(Errc::ZeroImage, "V(f) vanishes identically");
  power_in_place(V.values, q - 1.0);
  scale_in_place(V.values, 1.0 / halfspace_norm(V, qprime));
  return V;
}

BoundaryProfile f_from_image(BoundaryProfile W, double p, double pprime) {
  if (all_zero(W.values)) throw Error(Errc::ZeroImage, "W(g) vanishes identically");
  W.decreasing = false;
  power_in_place(W.values, pprime - 1.0);
  scale_in_place(W.values, 1.0 / boundary_norm(W, p));
  return W;
}

// Dilate by a whole number of lattice cells so that the half-mass radius of
// |f|^p sits within one cell of r = 1.
BoundaryProfile fix_scale(const BoundaryProfile& f, double p, long& total_shift) {
  const double u = std::log(half_mass_radius(f, p)) / f.grid.log_step;
  if (std::abs(u) < 1.0) return f;
  const long k = std::lround(u);
  total_shift += k;
  BoundaryProfile out = shift_profile(f, -k, p, true);
  scale_in_place(out.values, 1.0 / boundary_norm(out, p));
  return out;
}

double image_q_norm(const HalfSpaceProfile& V, double q) { return halfspace_norm(V, q); }

void check_system_context(const SystemExponents& sys, const OperatorContext& ctx) {
  const Params& pr = ctx.params;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  if (sys.n != pr.n || !close(sys.gamma, pr.gamma) || !close(sys.alpha, pr.alpha) || !close(sys.beta, pr.beta))
    throw Error(Errc::PreconditionError, "system exponents do not match the operator context");
}

}  // namespace

const char* scale_fix_name(ScaleFix s) { return s == ScaleFix::HalfMassRadius ? "HalfMassRadius" : "None"; }

const char* init_kind_name(InitKind k) {
  switch (k) {
    case InitKind::PowerLawBump: return "PowerLawBump";
    case InitKind::Indicator: return "Indicator";
    case InitKind::FromFile: return "FromFile";
  }
  return "PowerLawBump";
}

ScaleFix parse_scale_fix(const std::string& text) {
  if (text == "HalfMassRadius") return ScaleFix::HalfMassRadius;
  if (text == "None") return ScaleFix::None;
  throw Error(Errc::ParseError, "unknown scale fix '" + text + "'");
}

InitKind parse_init_kind(const std::string& text) {
  if (text == "PowerLawBump") return InitKind::PowerLawBump;
  if (text == "Indicator") return InitKind::Indicator;
  if (text == "FromFile") return InitKind::FromFile;
  throw Error(Errc::ParseError, "unknown init kind '" + text + "'");
}

BoundaryProfile initial_profile(const OperatorContext& ctx, const SolveOptions& opts, double p) {
  BoundaryProfile f = zero_boundary(ctx);
  const int n = ctx.params.n;
  switch (opts.init) {
    case InitKind::PowerLawBump:
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double r = f.grid.nodes[i];
        f.values[i] = std::pow(1.0 + r * r, -(n - 1.0) / p);
      }
      break;
    case InitKind::Indicator:
      for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = f.grid.nodes[i] <= 1.0 ? 1.0 : 0.0;
      break;
    case InitKind::FromFile:
      if (!opts.init_profile) throw Error(Errc::PreconditionError, "FromFile init without a profile");
      if (!same_grid(opts.init_profile->grid, ctx.boundary) || opts.init_profile->n != n)
        throw Error(Errc::GridMismatch, "initial profile is not on the boundary grid");
      f.values = opts.init_profile->values;
      break;
  }
  for (double& x : f.values) x = std::max(0.0, x);
  if (all_zero(f.values)) throw Error(Errc::ZeroImage, "initial profile is zero");
  scale_in_place(f.values, 1.0 / boundary_norm(f, p));
  return f;
}

HalfSpaceProfile optimal_g(const BoundaryProfile& f, const OperatorContext& ctx) {
  if (std::abs(boundary_norm(f, ctx.params.p) - 1.0) > 1e-10)
    throw Error(Errc::PreconditionError, "f must have unit L^p norm");
  return g_from_image(apply_V(f, ctx), ctx.params.q, ctx.params.qprime);
}

BoundaryProfile optimal_f(const HalfSpaceProfile& g, const OperatorContext& ctx) {
  if (std::abs(halfspace_norm(g, ctx.params.qprime) - 1.0) > 1e-10)
    throw Error(Errc::PreconditionError, "g must have unit L^{q'} norm");
  return f_from_image(apply_W(g, ctx), ctx.params.p, ctx.params.pprime);
}

SolveReport solve_extremal(const OperatorContext& ctx, const SolveOptions& opts) {
  const Params& pr = ctx.params;
  if (!check_admissible(pr).overall_pass) throw Error(Errc::PreconditionError, "parameters are not admissible");
  if (!(pr.p < pr.q)) throw Error(Errc::PreconditionError, "extremals are only sought for p < q");
  if (opts.max_iters < 1 || !(opts.tol_J > 0.0) || !(opts.tol_res > 0.0))
    throw Error(Errc::PreconditionError, "invalid solver options");

  SolveReport rep;
  BoundaryProfile f = decreasing_rearrangement(initial_profile(ctx, opts, pr.p));
  if (opts.scale_fix == ScaleFix::HalfMassRadius) f = fix_scale(f, pr.p, rep.scale_shift);
  HalfSpaceProfile V = apply_V(f, ctx);
  double J = image_q_norm(V, pr.q);
  HalfSpaceProfile g = g_from_image(std::move(V), pr.q, pr.qprime);
  rep.J_history.push_back(J);

  for (int it = 1; it <= opts.max_iters; ++it) {
    BoundaryProfile fn = decreasing_rearrangement(f_from_image(apply_W(g, ctx), pr.p, pr.pprime));
    const long before = rep.scale_shift;
    if (opts.scale_fix == ScaleFix::HalfMassRadius) fn = fix_scale(fn, pr.p, rep.scale_shift);
    HalfSpaceProfile Vn = apply_V(fn, ctx);
    const double Jn = image_q_norm(Vn, pr.q);
    HalfSpaceProfile gn = g_from_image(std::move(Vn), pr.q, pr.qprime);
    rep.stationarity = rep.scale_shift == before ? rel_sup_gap(gn.values, g.values) : kInf;
    rep.J_history.push_back(Jn);
    rep.iterations = it;
    const bool stalled = std::abs(Jn - J) <= opts.tol_J * Jn;
    f = std::move(fn);
    g = std::move(gn);
    J = Jn;
    if (stalled && rep.stationarity <= opts.tol_res) {
      rep.converged = true;
      break;
    }
  }

  rep.C_est = J;
  // Residuals of the stationarity system W(g) = J f^{p-1}, V(f) = J g^{q'-1}.
  {
    BoundaryProfile lhs = apply_W(g, ctx), rhs = f;
    for (double& x : rhs.values) x = J * std::pow(x, pr.p - 1.0);
    HalfSpaceProfile lv = apply_V(f, ctx), rv = g;
    for (double& x : rv.values) x = J * std::pow(x, pr.qprime - 1.0);
    rep.el_residual = {rel_sup_gap(lhs.values, rhs.values), rel_sup_gap(lv.values, rv.values)};
  }
  rep.truncation_boundary = truncation_diag(f, pr.p);
  rep.truncation_interior = truncation_diag(g, pr.qprime);
  rep.f_star = std::move(f);
  rep.g_star = std::move(g);
  return rep;
}

BoundaryProfile system_T1(const HalfSpaceProfile& v, const SystemExponents& sys, const OperatorContext& ctx) {
  HalfSpaceProfile vq = v;
  power_in_place(vq.values, sys.q0);
  BoundaryProfile u = apply_W(vq, ctx);
  u.decreasing = false;
  if (sys.kind == SystemKind::SingleWeighted && sys.alpha != 0.0)
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= std::pow(u.grid.nodes[i], sys.alpha);
  return u;
}

HalfSpaceProfile system_T2(const BoundaryProfile& u, const SystemExponents& sys, const OperatorContext& ctx) {
  BoundaryProfile up = u;
  power_in_place(up.values, sys.p0);
  HalfSpaceProfile v = apply_V(up, ctx);
  if (sys.kind == SystemKind::SingleWeighted && sys.beta != 0.0) {
    const std::size_t nt = v.t_grid.size();
    for (std::size_t j = 0; j < v.rho_grid.size(); ++j)
      for (std::size_t k = 0; k < nt; ++k) {
        const double r2 = v.rho_grid.nodes[j] * v.rho_grid.nodes[j] + v.t_grid.nodes[k] * v.t_grid.nodes[k];
        v.values[j * nt + k] *= std::pow(r2, 0.5 * sys.beta);
      }
  }
  return v;
}

std::array<double, 2> el_residual(const BoundaryProfile& u, const HalfSpaceProfile& v, const SystemExponents& sys,
                                  const OperatorContext& ctx) {
  const BoundaryProfile tu = system_T1(v, sys, ctx);
  const HalfSpaceProfile tv = system_T2(u, sys, ctx);
  return {rel_sup_gap(u.values, tu.values), rel_sup_gap(v.values, tv.values)};
}

SystemSolution solve_system(const SystemExponents& sys, const OperatorContext& ctx, const SolveOptions& opts) {
  if (!check_system(sys).overall_pass) throw Error(Errc::PreconditionError, "system exponents fail check_system");
  check_system_context(sys, ctx);
  if (std::abs(sys.p0 * sys.q0 - 1.0) < 1e-12)
    throw Error(Errc::PreconditionError, "p0 q0 = 1: the system has no amplitude gauge");
  if (opts.max_iters < 1 || !(opts.tol_J > 0.0) || !(opts.tol_res > 0.0))
    throw Error(Errc::PreconditionError, "invalid solver options");

  const double pu = sys.p0 + 1.0;  // gauge norm for u
  const double pf = (sys.p0 + 1.0) / sys.p0, qg = (sys.q0 + 1.0) / sys.q0;
  SystemSolution out;
  SolveReport& rep = out.report;

  BoundaryProfile u = initial_profile(ctx, opts, pu);
  if (opts.scale_fix == ScaleFix::HalfMassRadius) u = fix_scale(u, pu, rep.scale_shift);
  double gain = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const HalfSpaceProfile v = system_T2(u, sys, ctx);
    if (all_zero(v.values)) throw Error(Errc::ZeroImage, "T2(u^p0) vanishes identically");
    BoundaryProfile un = system_T1(v, sys, ctx);
    if (all_zero(un.values)) throw Error(Errc::ZeroImage, "T1(v^q0) vanishes identically");
    gain = boundary_norm(un, pu);
    scale_in_place(un.values, 1.0 / gain);
    const long before = rep.scale_shift;
    if (opts.scale_fix == ScaleFix::HalfMassRadius) un = fix_scale(un, pu, rep.scale_shift);
    const double res = rep.scale_shift == before ? rel_sup_gap(un.values, u.values) : kInf;

    // Normalized value of the functional for the pair (u^{p0}, v^{q0}).
    BoundaryProfile f = u;
    power_in_place(f.values, sys.p0);
    HalfSpaceProfile g = v;
    power_in_place(g.values, sys.q0);
    rep.J_history.push_back(interior_inner(g, v, ctx) / (boundary_norm(f, pf) * halfspace_norm(g, qg)));

    rep.iterations = it;
    rep.stationarity = res;
    u = std::move(un);
    if (res <= opts.tol_res) {
      rep.converged = true;
      break;
    }
  }

  // N(u) = gain u at the fixed point, so mu u solves the system when
  // mu^{p0 q0 - 1} = 1 / gain.
  const double mu = std::pow(gain, -1.0 / (sys.p0 * sys.q0 - 1.0));
  scale_in_place(u.values, mu);
  HalfSpaceProfile v = system_T2(u, sys, ctx);
  rep.el_residual = el_residual(u, v, sys, ctx);
  rep.C_est = rep.J_history.empty() ? 0.0 : rep.J_history.back();
  rep.truncation_boundary = truncation_diag(u, pu);
  rep.truncation_interior = truncation_diag(v, sys.q0 + 1.0);
  rep.f_star = u;
  rep.g_star = v;
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

SystemSolution extremal_to_system(const BoundaryProfile& f, const HalfSpaceProfile& g, double J,
                                  const SystemExponents& sys) {
  const double p = (sys.p0 + 1.0) / sys.p0, qprime = (sys.q0 + 1.0) / sys.q0;
  const double c1 = std::pow(J, -(sys.q0 + 1.0) / (sys.p0 * sys.q0 - 1.0));
  const double c2 = std::pow(c1, sys.p0) * J;
  SystemSolution s;
  s.u = f;
  s.u.decreasing = false;
  for (double& x : s.u.values) x = c1 * std::pow(x, p - 1.0);
  s.v = g;
  for (double& x : s.v.values) x = c2 * std::pow(x, qprime - 1.0);
  return s;
}

}  // namespace swpk
