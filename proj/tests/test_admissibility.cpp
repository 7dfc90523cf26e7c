#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "swpk/admissibility.hpp"
#include "swpk/error.hpp"

using namespace swpk;
using doctest::Approx;

namespace {

const Condition& find(const AdmissibilityReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return c;
  FAIL("no condition named " << name);
  return r.conditions.front();
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::ParseError;
}

// Plain midpoint sum of a radial integral, for checking the closed forms.
double radial_sum(double a, double b, double power, int cells = 2000000) {
  const double la = std::log(a), lb = std::log(b), h = (lb - la) / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) s += std::exp((power + 1.0) * (la + (i + 0.5) * h));
  return s * h;
}

}  // namespace

TEST_CASE("derived exponents by hand arithmetic") {
  auto a = derive_exponents(3, 2.0, 2.0, 0.0, 0.0);
  CHECK(a.qprime == Approx(1.5));
  CHECK(a.q == Approx(3.0));
  CHECK(a.pprime == Approx(2.0));

  auto b = derive_exponents(3, 2.0, 3.0, 0.5, 0.5);
  CHECK(b.qprime == Approx(1.5));
  CHECK(b.q == Approx(3.0));

  auto c = derive_exponents(4, 2.0, 2.0, 0.0, 0.0);
  CHECK(c.qprime == Approx(1.6));
  CHECK(c.q == Approx(8.0 / 3.0));

  CHECK(code_of([] { derive_exponents(2, 2.0, 2.0, 0.0, 0.0); }) == Errc::PreconditionError);
  CHECK(code_of([] { derive_exponents(3, 1.0, 2.0, 0.0, 0.0); }) == Errc::PreconditionError);
  // 1/q' = 1 - 1/3 - 3/3 < 0
  CHECK(code_of([] { derive_exponents(3, 2.0, 2.0, 2.0, 1.0); }) == Errc::NonPositiveExponent);
}

TEST_CASE("admissibility report") {
  auto ok = check_admissible(derive_exponents(3, 2.0, 2.0, 0.0, 0.0));
  CHECK(ok.overall_pass);
  CHECK(find(ok, "alpha<(n-1)/p'").slack == Approx(1.0));
  CHECK(find(ok, "exponent relation").slack < 1e-12);

  auto big_alpha = check_admissible(derive_exponents(3, 2.0, 2.0, 1.5, -1.5));
  CHECK_FALSE(big_alpha.overall_pass);
  CHECK_FALSE(find(big_alpha, "alpha<(n-1)/p'").pass);

  auto neg_sum = check_admissible(derive_exponents(3, 2.0, 2.0, 0.1, -0.2));
  CHECK_FALSE(neg_sum.overall_pass);
  CHECK_FALSE(find(neg_sum, "alpha+beta>=0").pass);
  CHECK(find(neg_sum, "alpha<(n-1)/p'").pass);

  Params broken = derive_exponents(3, 2.0, 2.0, 0.0, 0.0);
  broken.qprime = 2.0;
  CHECK_FALSE(find(check_admissible(broken), "exponent relation").pass);
}

TEST_CASE("every passing derived set satisfies the relation to 1e-12") {
  for (int n : {3, 4, 5})
    for (double p : {1.3, 2.0, 3.5})
      for (double gamma : {2.0, 2.4, 2.9})
        for (double alpha : {0.0, 0.2})
          for (double beta : {0.0, 0.3}) {
            Params pr;
            try {
              pr = derive_exponents(n, p, gamma, alpha, beta);
            } catch (const Error&) {
              continue;
            }
            auto rep = check_admissible(pr);
            if (rep.overall_pass) CHECK(find(rep, "exponent relation").slack < 1e-12);
          }
}

TEST_CASE("system relations") {
  SystemExponents s;
  s.n = 3;
  s.gamma = 2.5;
  s.p0 = 5.0 / 3.0;
  s.q0 = 3.0;
  s.kind = SystemKind::SingleWeighted;
  CHECK(check_system(s).overall_pass);
  s.kind = SystemKind::DoubleWeighted;
  CHECK(check_system(s).overall_pass);

  s.kind = SystemKind::SingleWeighted;
  s.p0 = 1.0;
  s.q0 = 1.0;
  CHECK_FALSE(check_system(s).overall_pass);

  // With alpha = beta = 0 the two relations are n times each other.
  for (double p0 : {0.5, 1.0, 5.0 / 3.0, 2.0, 4.0}) {
    SystemExponents a;
    a.n = 3;
    a.gamma = 2.5;
    a.p0 = p0;
    // Solve the single weighted relation for q0.
    a.q0 = 3.0 / (1.5 - 2.0 / (p0 + 1.0)) - 1.0;
    if (!(a.q0 > 0.0)) continue;
    a.kind = SystemKind::SingleWeighted;
    const bool single = check_system(a).overall_pass;
    a.kind = SystemKind::DoubleWeighted;
    CHECK(check_system(a).overall_pass == single);
  }
}

TEST_CASE("asymptotic hypothesis flags") {
  SystemExponents s;
  s.n = 3;
  s.gamma = 2.5;
  s.p0 = 5.0 / 3.0;
  s.q0 = 3.0;
  auto f = check_asymptotic_hypothesis(s);
  CHECK(f.boundary_ok);
  CHECK_FALSE(f.interior_ok);
  s.p0 = 1.0;
  f = check_asymptotic_hypothesis(s);
  CHECK_FALSE(f.boundary_ok);
  CHECK_FALSE(f.interior_ok);
}

TEST_CASE("Hardy closed forms") {
  constexpr double pi = std::numbers::pi;
  CHECK(hardy_tail_integral(1.0, 4.0, 3) == Approx(2.0 * pi));
  CHECK(hardy_tail_integral(2.0, 4.0, 3) == Approx(pi));
  CHECK(code_of([] { hardy_tail_integral(1.0, 3.0, 3); }) == Errc::DivergentIntegral);

  CHECK(hardy_ball_integral(1.0, 0.0, 3) == Approx(pi));
  CHECK(hardy_ball_integral(2.0, 1.0, 3) == Approx(4.0 * pi));
  CHECK(code_of([] { hardy_ball_integral(1.0, 2.0, 3); }) == Errc::DivergentIntegral);

  // Against direct radial sums: half sphere area 2 pi in R^3, circle 2 pi in R^2.
  CHECK(hardy_tail_integral(0.7, 4.5, 3) == Approx(2.0 * pi * radial_sum(0.7, 1e6, 2.0 - 4.5)).epsilon(1e-6));
  CHECK(hardy_ball_integral(1.3, 0.4, 3) == Approx(2.0 * pi * radial_sum(1e-12, 1.3, 1.0 - 0.4)).epsilon(1e-6));
  CHECK(halfspace_ball_integral(1.3, 1.5, 3) == Approx(2.0 * pi * radial_sum(1e-12, 1.3, 2.0 - 1.5)).epsilon(1e-6));
  CHECK(boundary_tail_integral(0.9, 3.5, 3) == Approx(2.0 * pi * radial_sum(0.9, 1e8, 1.0 - 3.5)).epsilon(1e-6));

  // R^{mu-n} tail and R^{nu-(n-1)} ball are R-free.
  const double t1 = hardy_tail_integral(0.5, 4.2, 4) * std::pow(0.5, 0.2);
  const double t2 = hardy_tail_integral(40.0, 4.2, 4) * std::pow(40.0, 0.2);
  CHECK(t1 == Approx(t2).epsilon(1e-13));
  const double b1 = hardy_ball_integral(0.5, 1.1, 4) * std::pow(0.5, 1.1 - 3.0);
  const double b2 = hardy_ball_integral(40.0, 1.1, 4) * std::pow(40.0, 1.1 - 3.0);
  CHECK(b1 == Approx(b2).epsilon(1e-13));
}

TEST_CASE("Hardy products do not depend on R") {
  const std::array<double, 6> radii = {1e-2, 0.5, 1.0, 2.0, 4.0, 1e2};
  for (const Params& p : {derive_exponents(3, 2.0, 2.0, 0.0, 0.0), derive_exponents(3, 1.8, 2.5, 0.2, 0.1),
                          derive_exponents(4, 2.5, 2.2, 0.3, -0.1)}) {
    REQUIRE(check_admissible(p).overall_pass);
    const auto h = hardy_products(p, radii);
    REQUIRE(h.size() == radii.size());
    for (const auto& x : h) {
      CHECK(x.a0 == Approx(h.front().a0).epsilon(1e-12));
      CHECK(x.a1 == Approx(h.front().a1).epsilon(1e-12));
    }
  }
}

TEST_CASE("parameter adapters") {
  const Params p = derive_exponents(3, 2.0, 2.0, 0.0, 0.0);
  const auto s = system_from_params(p);
  CHECK(s.p0 == Approx(1.0));
  CHECK(s.q0 == Approx(2.0));
  CHECK(s.kind == SystemKind::DoubleWeighted);
  const Params back = params_for_system(s);
  CHECK(back.p == Approx(2.0));
  CHECK(back.qprime == Approx(1.5));
  CHECK(parse_system_kind(system_kind_name(SystemKind::SingleWeighted)) == SystemKind::SingleWeighted);
  CHECK(code_of([] { parse_system_kind("Triple"); }) == Errc::ParseError);
}
