#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "swpk/error.hpp"
#include "swpk/solver.hpp"
#include "swpk/verifier.hpp"

using namespace swpk;
using doctest::Approx;

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

SystemExponents decay_system() {
  SystemExponents s;
  s.n = 3;
  s.gamma = 2.5;
  s.alpha = 0.25;
  s.beta = 0.0;
  s.p0 = 5.0 / 3.0;
  s.q0 = 2.0;
  s.kind = SystemKind::DoubleWeighted;
  return s;
}

SystemExponents pohozaev_system() {
  SystemExponents s;
  s.n = 3;
  s.gamma = 2.5;
  s.p0 = 5.0 / 3.0;
  s.q0 = 3.0;
  s.kind = SystemKind::SingleWeighted;
  return s;
}

// r^{-a0} near 0 and r^{-a_inf} near infinity.
double two_sided(double r, double a0, double ainf) { return std::pow(r, -a0) / (1.0 + std::pow(r, ainf - a0)); }

HalfSpaceProfile radial_interior(const OperatorContext& ctx, double a0, double ainf) {
  auto v = zero_halfspace(ctx);
  for (std::size_t j = 0; j < ctx.rho.size(); ++j)
    for (std::size_t k = 0; k < ctx.t.size(); ++k)
      v.values[j * ctx.t.size() + k] = two_sided(std::hypot(ctx.rho.nodes[j], ctx.t.nodes[k]), a0, ainf);
  return v;
}

// int u^r r^{n-2} dr over [lo, 1/lo], by a log-midpoint sum.
double window_integral(double a0, double ainf, double r, int n, double lo) {
  const int cells = 200000;
  const double a = std::log(lo), b = -std::log(lo), h = (b - a) / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = std::exp(a + (i + 0.5) * h);
    s += std::pow(two_sided(x, a0, ainf), r) * std::pow(x, n - 1);
  }
  return s * h;
}

}  // namespace

TEST_CASE("decay exponents of known profiles") {
  const auto g = make_decade_grid(1e-4, 1e4, 16);
  auto d = estimate_decay(make_boundary_profile(g, 3, [](double r) { return 1.0 / (r * r); }));
  CHECK(d.a0 == Approx(2.0).epsilon(1e-10));
  CHECK(d.a_inf == Approx(2.0).epsilon(1e-10));
  d = estimate_decay(make_boundary_profile(g, 3, [](double r) { return 1.0 / (1.0 + r * r); }));
  CHECK(d.a0 == Approx(0.0).epsilon(1e-6).scale(1.0));
  CHECK(d.a_inf == Approx(2.0).epsilon(1e-6));
  CHECK(code_of([&] { estimate_decay(make_boundary_profile(g, 3, [](double r) { return r < 1e3 ? 1.0 : 0.0; })); }) ==
        Errc::InsufficientSupport);
  CHECK(code_of([&] { estimate_decay(make_boundary_profile(make_log_grid(1.0, 2.0, 3), 3, [](double) { return 1.0; })); }) ==
        Errc::InsufficientSupport);
}

TEST_CASE("diagonal profile") {
  const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-2, 1e2, 1e-3, 1e2, 8);
  const auto v = radial_interior(ctx, 0.5, 3.0);
  const auto d = diagonal_profile(v);
  REQUIRE(d.values.size() == ctx.rho.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    CHECK(d.grid.nodes[i] == Approx(std::sqrt(2.0) * ctx.rho.nodes[i]));
    CHECK(d.values[i] == Approx(two_sided(d.grid.nodes[i], 0.5, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("regularity window against direct norms") {
  const auto sys = decay_system();
  const auto ctx = make_operator_context(params_for_system(sys), 1e-4, 1e4, 1e-4, 1e4, 8);
  // Window midpoints for this system: 1/r = 3/8 on the boundary, 1/s = 1/3 inside.
  const double r = 8.0 / 3.0, s = 3.0;

  const auto good_u = make_boundary_profile(ctx.boundary, 3, [](double x) { return two_sided(x, 0.25, 2.0); });
  const auto good_v = radial_interior(ctx, 0.0, 2.0);
  const auto rec = regularity_window_check(good_u, good_v, sys);
  CHECK(rec.pass);
  CHECK(rec.measured == Approx(0.5).epsilon(1e-3));
  // Direct check: the L^r integral of u and the L^s integral of v settle under widening.
  CHECK(window_integral(0.25, 2.0, r, 3, 1e-8) == Approx(window_integral(0.25, 2.0, r, 3, 1e-12)).epsilon(1e-3));
  CHECK(window_integral(0.0, 2.0, s, 4, 1e-8) == Approx(window_integral(0.0, 2.0, s, 4, 1e-12)).epsilon(1e-3));

  // u blowing up like r^{-1} at 0 leaves L^r: the surrogate fails and the grid integral keeps growing.
  const auto bad_u = make_boundary_profile(ctx.boundary, 3, [](double x) { return two_sided(x, 1.0, 2.0); });
  CHECK_FALSE(regularity_window_check(bad_u, good_v, sys).pass);
  CHECK(window_integral(1.0, 2.0, r, 3, 1e-8) > 2.0 * window_integral(1.0, 2.0, r, 3, 1e-4));
}

TEST_CASE("scaling record") {
  const std::array<double, 1> one = {1.0};
  const std::array<double, 4> lam = {0.25, 0.5, 2.0, 4.0};
  auto gap = [&](int npd, auto& rec) {
    const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-4, 1e4, 1e-4, 1e4, npd);
    const auto f = make_boundary_profile(ctx.boundary, 3, [](double r) { return std::exp(-r * r); });
    CHECK(verify_scaling(f, one, ctx).relative_gap == 0.0);
    rec = verify_scaling(f, lam, ctx);
    return rec.relative_gap;
  };
  VerificationRecord r16, r32, r64;
  const double g16 = gap(16, r16), g32 = gap(32, r32), g64 = gap(64, r64);
  // The gap is discretization error: second order in the step.
  CHECK(g32 < 0.35 * g16);
  CHECK(g64 < 0.35 * g32);
  CHECK(r64.pass);

  const auto narrow = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-1, 1e1, 1e-1, 1e1, 16);
  const auto fn = make_boundary_profile(narrow.boundary, 3, [](double r) { return std::exp(-r * r); });
  const std::array<double, 1> far = {100.0};
  const auto bad = verify_scaling(fn, far, narrow);
  CHECK_FALSE(bad.pass);
  CHECK(bad.relative_gap > 0.5);
  CHECK(bad.note.find("truncation") != std::string::npos);
}

TEST_CASE("inequality trials and the Lorentz probe") {
  const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-4, 1e4, 1e-5, 1e4, 16);
  SolveOptions o;
  o.tol_J = 1e-10;
  o.tol_res = 1e-6;
  const auto rep = solve_extremal(ctx, o);
  REQUIRE(rep.converged);
  CHECK(functional_J(rep.f_star, rep.g_star, ctx) /
            (boundary_norm(rep.f_star, 2.0) * halfspace_norm(rep.g_star, ctx.params.qprime)) ==
        Approx(rep.C_est).epsilon(1e-12));

  const auto rec = verify_inequality(ctx, 20, 11, rep.C_est, 1e-2);
  CHECK(rec.pass);
  CHECK(rec.measured <= rep.C_est * 1.01);
  // Same seed, same record.
  CHECK(verify_inequality(ctx, 20, 11, rep.C_est, 1e-2).measured == rec.measured);
  // A constant far below the supremum is caught.
  CHECK_FALSE(verify_inequality(ctx, 20, 11, 0.5 * rep.C_est, 1e-2).pass);

  std::vector<BoundaryProfile> family;
  family.push_back(zero_boundary(ctx));
  for (double R : {0.1, 1.0, 10.0, 100.0})
    family.push_back(make_boundary_profile(ctx.boundary, 3, [R](double r) { return r < R ? 1.0 : 0.0; }));
  family.push_back(rep.f_star);
  const auto lp = lorentz_probe(ctx, family, rep.C_est);
  CHECK(lp.pass);
  CHECK(lp.inputs.find("used=5") != std::string::npos);
  CHECK(std::isfinite(lp.measured));
}

TEST_CASE("asymptotics and Pohozaev preconditions") {
  const auto sys = pohozaev_system();
  const auto ctx = make_operator_context(params_for_system(sys), 1e-3, 1e3, 1e-3, 1e3, 8);
  auto u = make_boundary_profile(ctx.boundary, 3, [](double r) { return 1.0 / (1.0 + r * r); });
  const auto v = radial_interior(ctx, 0.0, 2.0);
  CHECK(code_of([&] { verify_asymptotics(u, v, sys, ctx, AsymptoticSide::Interior); }) == Errc::HypothesisNotSatisfied);
  const auto both = verify_asymptotics(u, v, sys, ctx);
  CHECK(both.second.skipped);
  CHECK(both.second.pass);

  // Profiles that do not solve the system miss the identity by O(1).
  const auto pz = verify_pohozaev(u, v, sys, ctx);
  const bool all_pass = pz.identity.pass && pz.balance.pass && pz.energy.pass;
  CHECK_FALSE(all_pass);
  auto dw = sys;
  dw.kind = SystemKind::DoubleWeighted;
  CHECK(code_of([&] { verify_pohozaev(u, v, dw, ctx); }) == Errc::PreconditionError);
}

TEST_CASE("closed-form records") {
  const std::array<double, 4> radii = {0.5, 1.0, 2.0, 4.0};
  CHECK(verify_hardy(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), radii).pass);
  const std::array<double, 3> rhos = {0.01, 0.1, 1.0}, ts = {0.1, 1.0, 10.0};
  const auto m = verify_kernel_mass(3, 2.0, rhos, ts, 1e-4, 1e4, 64);
  CHECK(m.pass);
  CHECK(m.reference == Approx(2.0 * 3.141592653589793));
  const auto ctx = make_operator_context(derive_exponents(4, 2.0, 2.4, 0.0, 0.0), 1e-2, 1e2, 1e-2, 1e2, 8);
  CHECK(verify_adjoint(ctx, 3, 1).pass);
}
