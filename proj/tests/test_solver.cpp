#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "swpk/error.hpp"
#include "swpk/solver.hpp"

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

double discrete_q_norm(const HalfSpaceProfile& V, double q) {
  const auto om = interior_node_measure(V.rho_grid, V.t_grid, V.n);
  double s = 0.0;
  for (std::size_t i = 0; i < om.size(); ++i) s += om[i] * std::pow(std::abs(V.values[i]), q);
  return std::pow(s, 1.0 / q);
}

double discrete_pp_norm(const BoundaryProfile& W, double pp) {
  const auto mu = boundary_node_measure(W.grid, W.n);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu[i] * std::pow(std::abs(W.values[i]), pp);
  return std::pow(s, 1.0 / pp);
}

BoundaryProfile unit_bump(const OperatorContext& ctx, double p) {
  auto f = zero_boundary(ctx);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::exp(-ctx.boundary.nodes[i]);
  const double c = boundary_norm(f, p);
  for (double& v : f.values) v /= c;
  return f;
}

// q = 2: 1/q = 2/(3p) + (alpha+beta+2-gamma)/3 with p = 2, gamma = 2, alpha + beta = 1/2.
const OperatorContext& ctx_q2() {
  static const OperatorContext c = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.25, 0.25), 1e-3, 1e3, 1e-3, 1e3, 8);
  return c;
}

const OperatorContext& ctx_main() {
  static const OperatorContext c = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-3, 1e3, 1e-3, 1e3, 8);
  return c;
}

}  // namespace

TEST_CASE("optimal g") {
  const auto& c2 = ctx_q2();
  REQUIRE(c2.params.q == Approx(2.0));
  const auto f = unit_bump(c2, c2.params.p);
  const auto g = optimal_g(f, c2);
  const auto V = apply_V(f, c2);
  // q = 2: g is V(f) up to a constant.
  const double ratio = g.values[100] / V.values[100];
  for (std::size_t i = 0; i < g.values.size(); i += 13) CHECK(g.values[i] == Approx(ratio * V.values[i]).epsilon(1e-12));

  const auto& c = ctx_main();
  const auto f3 = unit_bump(c, c.params.p);
  const auto g3 = optimal_g(f3, c);
  CHECK(halfspace_norm(g3, c.params.qprime) == Approx(1.0).epsilon(1e-12));
  const double best = functional_J(f3, g3, c);
  CHECK(best == Approx(discrete_q_norm(apply_V(f3, c), c.params.q)).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = zero_halfspace(c);
    for (double& x : h.values) x = u(rng) * (trial % 2 ? 1.0 : u(rng));
    const double nrm = halfspace_norm(h, c.params.qprime);
    for (double& x : h.values) x /= nrm;
    CHECK(functional_J(f3, h, c) <= best + 1e-12);
  }

  auto not_unit = f3;
  for (double& v : not_unit.values) v *= 2.0;
  CHECK(code_of([&] { optimal_g(not_unit, c); }) == Errc::PreconditionError);
}

TEST_CASE("optimal f") {
  const auto& c = ctx_main();
  const auto g = optimal_g(unit_bump(c, c.params.p), c);
  const auto f = optimal_f(g, c);
  const auto W = apply_W(g, c);
  // p = 2: f is W(g) up to a constant.
  const double ratio = f.values[20] / W.values[20];
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(f.values[i] == Approx(ratio * W.values[i]).epsilon(1e-12));
  const double best = functional_J(f, g, c);
  CHECK(best == Approx(discrete_pp_norm(W, c.params.pprime)).epsilon(1e-12));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = zero_boundary(c);
    for (double& x : h.values) x = u(rng);
    const double nrm = boundary_norm(h, c.params.p);
    for (double& x : h.values) x /= nrm;
    CHECK(functional_J(h, g, c) <= best + 1e-12);
  }
}

TEST_CASE("extremal solve on a coarse grid") {
  const auto ctx = make_operator_context(derive_exponents(3, 2.0, 2.0, 0.0, 0.0), 1e-4, 1e4, 1e-5, 1e4, 16);
  SolveOptions o;
  o.tol_J = 1e-10;
  o.tol_res = 1e-6;
  const auto rep = solve_extremal(ctx, o);
  CHECK(rep.converged);
  for (std::size_t i = 1; i < rep.J_history.size(); ++i) CHECK(rep.J_history[i] >= rep.J_history[i - 1] - 1e-10);
  CHECK(rep.C_est == Approx(rep.J_history.back()));
  CHECK(rep.f_star.decreasing);
  for (std::size_t i = 1; i < rep.f_star.values.size(); ++i) CHECK(rep.f_star.values[i] <= rep.f_star.values[i - 1]);
  CHECK(boundary_norm(rep.f_star, 2.0) == Approx(1.0).epsilon(1e-10));
  CHECK(half_mass_radius(rep.f_star, 2.0) == Approx(1.0).epsilon(ctx.boundary.log_step));

  // The maximizer beats the initial guess and an arbitrary competitor.
  const auto f0 = decreasing_rearrangement(initial_profile(ctx, o, 2.0));
  CHECK(rep.C_est >= discrete_q_norm(apply_V(f0, ctx), ctx.params.q));

  // Stationarity: g_star is optimal_g(f_star).
  const auto g = optimal_g(rep.f_star, ctx);
  for (std::size_t i = 0; i < g.values.size(); i += 17) CHECK(g.values[i] == Approx(rep.g_star.values[i]).epsilon(1e-12));

  // Without the scale fix the answer barely moves on this grid.
  SolveOptions none = o;
  none.scale_fix = ScaleFix::None;
  none.max_iters = 60;
  SolveReport free_rep;
  try {
    free_rep = solve_extremal(ctx, none);
  } catch (const Error&) {
  }
  CHECK(free_rep.J_history.back() == Approx(rep.C_est).epsilon(2e-3));

  // The Euler-Lagrange pair built from the extremal reproduces the report residuals.
  const auto sys = system_from_params(ctx.params);
  const auto s = extremal_to_system(rep.f_star, rep.g_star, rep.C_est, sys);
  const auto res = el_residual(s.u, s.v, sys, ctx);
  // Same residual, normalized by the left instead of the right-hand side.
  CHECK(res[0] == Approx(rep.el_residual[0]).epsilon(3.0 * rep.el_residual[0]));
  CHECK(res[1] < 1e-12);
}

TEST_CASE("solver preconditions") {
  SolveOptions o;
  const Params bad = derive_exponents(3, 2.0, 2.0, 1.5, -1.5);
  const auto ctx_bad = make_operator_context(bad, 1e-2, 1e2, 1e-2, 1e2, 4);
  CHECK(code_of([&] { solve_extremal(ctx_bad, o); }) == Errc::PreconditionError);

  // Admissible sets always have p < q; the q = 2 set has p = q and is rejected.
  CHECK(code_of([&] { solve_extremal(ctx_q2(), o); }) == Errc::PreconditionError);

  const auto& c = ctx_main();
  SolveOptions z = o;
  z.init = InitKind::FromFile;
  z.init_profile = zero_boundary(c);
  CHECK(code_of([&] { solve_extremal(c, z); }) == Errc::ZeroImage);

  SystemExponents sys = system_from_params(c.params);
  CHECK(code_of([&] { solve_system(sys, c, z); }) == Errc::ZeroImage);
  sys.kind = SystemKind::SingleWeighted;
  sys.p0 = 1.0;
  sys.q0 = 1.0;
  CHECK(code_of([&] { solve_system(sys, c, o); }) == Errc::PreconditionError);
}

TEST_CASE("system residuals") {
  SystemExponents sys;
  sys.n = 3;
  sys.gamma = 2.5;
  sys.p0 = 5.0 / 3.0;
  sys.q0 = 3.0;
  sys.kind = SystemKind::SingleWeighted;
  const auto ctx = make_operator_context(params_for_system(sys), 1e-3, 1e3, 1e-3, 1e3, 8);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  auto v = zero_halfspace(ctx);
  for (double& x : v.values) x = u(rng);
  // u defined from v by one application satisfies its own equation exactly.
  const auto tu = system_T1(v, sys, ctx);
  CHECK(el_residual(tu, v, sys, ctx)[0] < 1e-12);

  auto ur = zero_boundary(ctx);
  for (double& x : ur.values) x = u(rng);
  const auto r = el_residual(ur, v, sys, ctx);
  CHECK(r[0] > 1e-3);
  CHECK(r[1] > 1e-3);
}

TEST_CASE("single weighted solve converges to a fixed point") {
  SystemExponents sys;
  sys.n = 3;
  sys.gamma = 2.5;
  sys.p0 = 5.0 / 3.0;
  sys.q0 = 3.0;
  sys.kind = SystemKind::SingleWeighted;
  const auto ctx = make_operator_context(params_for_system(sys), 1e-4, 1e4, 1e-5, 1e4, 8);
  SolveOptions o;
  o.tol_res = 1e-7;
  const auto s = solve_system(sys, ctx, o);
  CHECK(s.report.converged);
  CHECK(s.report.el_residual[0] < 10.0 * o.tol_res);
  CHECK(s.report.el_residual[1] < 1e-12);
  const auto again = el_residual(s.u, s.v, sys, ctx);
  CHECK(again[0] == Approx(s.report.el_residual[0]));
}
