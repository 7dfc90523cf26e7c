#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "swpk/cli.hpp"
#include "swpk/error.hpp"
#include "swpk/io.hpp"
#include "swpk/operators.hpp"

using namespace swpk;
namespace fs = std::filesystem;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::ParseError;
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("swpk_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& cmd, std::vector<std::pair<std::string, std::string>> kv, const std::string& file = "") {
  std::ostringstream out, err;
  int code;
  try {
    code = run_command(make_run_config(cmd, file, kv), out, err);
  } catch (const Error& e) {
    code = kExitConfig;
    err << e.what();
  }
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("profile CSV round trip") {
  const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.2, 0.1, 0.0), 1e-2, 1e2, 1e-3, 1e2, 4);
  auto f = make_boundary_profile(ctx.boundary, 3, [](double r) { return std::exp(-r) / 3.0; });
  const auto back = parse_profile_csv(boundary_csv(f));
  REQUIRE(std::holds_alternative<BoundaryProfile>(back));
  const auto& fb = std::get<BoundaryProfile>(back);
  CHECK(fb.n == 3);
  CHECK(fb.values == f.values);
  CHECK(fb.grid.nodes == f.grid.nodes);

  const auto g = apply_V(f, ctx);
  const auto gb = parse_profile_csv(halfspace_csv(g));
  REQUIRE(std::holds_alternative<HalfSpaceProfile>(gb));
  CHECK(std::get<HalfSpaceProfile>(gb).values == g.values);
  CHECK(std::get<HalfSpaceProfile>(gb).t_grid.nodes == g.t_grid.nodes);
}

TEST_CASE("profile CSV errors") {
  CHECK(code_of([] { parse_profile_csv("r,value\n1,2\n"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_profile_csv("# kind=boundary n=3\nr,value\n1,abc\n"); }) == Errc::ParseError);
  // Not geometric.
  CHECK(code_of([] { parse_profile_csv("# kind=boundary n=3\nr,value\n1,1\n2,1\n5,1\n"); }) == Errc::ParseError);
  CHECK(code_of([] { read_file("/nonexistent/swpk/file.csv"); }) == Errc::ParseError);
}

TEST_CASE("config text and layering") {
  const auto kv = parse_config_text("# comment\nparams.n = 3\n\ngrid.r_min=1e-3  # trailing\n");
  CHECK(kv.at("params.n") == "3");
  CHECK(kv.at("grid.r_min") == "1e-3");
  CHECK(code_of([] { parse_config_text("no equals sign\n"); }) == Errc::ParseError);

  const auto cfg = make_run_config("hardy", "params.n=3\nparams.p=2\nparams.gamma=2.5\n", {{"gamma", "2"}, {"io.seed", "9"}});
  CHECK(cfg.number("params.gamma") == 2.0);
  CHECK(cfg.integer("params.n") == 3);
  CHECK(cfg.integer("io.seed") == 9);
  CHECK(cfg.number("params.alpha") == 0.0);
  CHECK_FALSE(cfg.has("params.p0"));
  CHECK(code_of([&] { cfg.text("params.p0"); }) == Errc::ParseError);
  CHECK(code_of([] { make_run_config("hardy", "", {{"grid.bogus", "1"}}); }) == Errc::ParseError);
  CHECK(code_of([] { make_run_config("hardy", "nope.x=1\n", {}); }) == Errc::ParseError);

  // The rendered config reproduces itself.
  const auto again = make_run_config("hardy", config_text(cfg), {});
  CHECK(again.values == cfg.values);
}

TEST_CASE("check-params exit codes") {
  const auto d = scratch("check");
  const std::string out = d.string();
  auto ok = run("check-params", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"io.out", out}});
  CHECK(ok.code == kExitPass);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["report"]["overall_pass"] == true);
  CHECK(j["params"]["q"].get<double>() == doctest::Approx(3.0));
  CHECK(fs::exists(d / "check_params.json"));

  CHECK(run("check-params", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"alpha", "1.5"}, {"beta", "-1.5"}, {"io.out", out}}).code ==
        kExitFail);
  CHECK(run("check-params", {{"n", "3"}, {"p", "2"}, {"io.out", out}}).code == kExitConfig);
  CHECK(run("check-params", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"solver.mode", "bogus"}, {"io.out", out}}).code ==
        kExitConfig);
  CHECK(run("no-such-command", {}).code == kExitConfig);
}

TEST_CASE("hardy and verify commands") {
  const auto d = scratch("hardy");
  const std::string out = d.string();
  auto h = run("hardy", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"io.out", out}});
  CHECK(h.code == kExitPass);
  CHECK(nlohmann::json::parse(h.out)["rows"].size() == 4);

  auto v = run("verify", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"verify.suite", "hardy"}, {"io.out", out}});
  CHECK(v.code == kExitPass);
  const auto j = nlohmann::json::parse(v.out);
  CHECK(j["records"].size() == 1);
  CHECK(j["all_pass"] == true);
  CHECK(run("verify", {{"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"verify.suite", "nope"}, {"io.out", out}}).code ==
        kExitConfig);
}

TEST_CASE("apply and solve commands") {
  const auto d = scratch("apply");
  const std::string out = d.string();
  const std::vector<std::pair<std::string, std::string>> base = {
      {"n", "3"}, {"p", "2"}, {"gamma", "2"}, {"grid.r_min", "1e-2"}, {"grid.r_max", "1e2"}, {"grid.nodes_per_decade", "4"},
      {"io.out", out}};

  const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-2, 1e2, 1e-2, 1e2, 4);
  atomic_write((d / "zero.csv").string(), boundary_csv(zero_boundary(ctx)));
  auto kv = base;
  kv.push_back({"io.input", (d / "zero.csv").string()});
  const auto a = run("apply", kv);
  CHECK(a.code == kExitPass);
  const auto img = parse_profile_csv(read_file((d / "image.csv").string()));
  REQUIRE(std::holds_alternative<HalfSpaceProfile>(img));
  for (double x : std::get<HalfSpaceProfile>(img).values) CHECK(x == 0.0);

  // Wrong direction for the input kind.
  kv.push_back({"io.direction", "W"});
  CHECK(run("apply", kv).code == kExitConfig);

  // A single-weighted system that violates the balance relation.
  auto sys = base;
  sys.push_back({"solver.mode", "system"});
  sys.push_back({"params.kind", "SingleWeighted"});
  sys.push_back({"p0", "1"});
  sys.push_back({"q0", "1"});
  CHECK(run("solve", sys).code == kExitConfig);
}
