#include "swpk/admissibility.hpp"

#include <cmath>
#include <limits>

#include "swpk/error.hpp"
#include "swpk/geometry.hpp"

namespace swpk {

namespace {

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

// Strict inequalities fail at zero slack; non-strict ones tolerate rounding.
Condition strict(std::string name, std::string statement, double slack) {
  return {std::move(name), std::move(statement), slack, slack > 0.0};
}

Condition weak(std::string name, std::string statement, double slack) {
  return {std::move(name), std::move(statement), slack, slack >= -kRelationTol};
}

Condition equality(std::string name, std::string statement, double residual) {
  const double r = std::abs(residual);
  return {std::move(name), std::move(statement), r, r < kRelationTol};
}

AdmissibilityReport finish(std::vector<Condition> conds) {
  AdmissibilityReport rep;
  rep.overall_pass = true;
  for (const auto& c : conds) rep.overall_pass = rep.overall_pass && c.pass;
  rep.conditions = std::move(conds);
  return rep;
}

}  // namespace

Params derive_exponents(int n, double p, double gamma, double alpha, double beta) {
  if (n < 3) throw Error(Errc::PreconditionError, "dimension n must be at least 3");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::PreconditionError, "p must lie in (1, inf)");
  if (!finite_all({gamma, alpha, beta})) throw Error(Errc::PreconditionError, "non-finite exponent");

  const double nd = n;
  const double inv_qprime = 1.0 - (nd - 1.0) / (nd * p) - (alpha + beta + 2.0 - gamma) / nd;
  const double inv_q = (nd - 1.0) / (nd * p) + (alpha + beta + 2.0 - gamma) / nd;
  if (!(inv_qprime > 0.0) || !(inv_qprime < 1.0))
    throw Error(Errc::NonPositiveExponent, "no q' in (1, inf) solves the exponent relation");
  if (!(inv_q > 0.0) || !(inv_q < 1.0))
    throw Error(Errc::NonPositiveExponent, "derived q is not in (1, inf)");

  Params out;
  out.n = n;
  out.p = p;
  out.gamma = gamma;
  out.alpha = alpha;
  out.beta = beta;
  out.qprime = 1.0 / inv_qprime;
  out.q = 1.0 / inv_q;
  out.pprime = p / (p - 1.0);
  out.s_kernel = 0.5 * (nd + 2.0 - gamma);
  return out;
}

AdmissibilityReport check_admissible(const Params& pr) {
  std::vector<Condition> c;
  const double nd = pr.n;
  if (!finite_all({pr.p, pr.qprime, pr.alpha, pr.beta, pr.gamma, pr.q, pr.pprime})) {
    c.push_back({"finite", "all exponents finite", -std::numeric_limits<double>::infinity(), false});
    return finish(std::move(c));
  }
  c.push_back(weak("n>=3", "n >= 3", nd - 3.0));
  c.push_back(strict("p>1", "1 < p < inf", pr.p - 1.0));
  c.push_back(strict("q'>1", "1 < q' < inf", pr.qprime - 1.0));
  c.push_back(weak("gamma>=2", "2 <= gamma", pr.gamma - 2.0));
  c.push_back(strict("gamma<n", "gamma < n", nd - pr.gamma));
  c.push_back(equality("exponent relation", "(n-1)/(n p) + 1/q' + (alpha+beta+2-gamma)/n = 1",
                       (nd - 1.0) / (nd * pr.p) + 1.0 / pr.qprime +
                           (pr.alpha + pr.beta + 2.0 - pr.gamma) / nd - 1.0));
  c.push_back(equality("dual exponent q", "1/q = (n-1)/(n p) + (alpha+beta+2-gamma)/n",
                       1.0 / pr.q - (nd - 1.0) / (nd * pr.p) -
                           (pr.alpha + pr.beta + 2.0 - pr.gamma) / nd));
  c.push_back(equality("conjugate p'", "1/p' = 1 - 1/p", 1.0 / pr.pprime - (1.0 - 1.0 / pr.p)));
  c.push_back(strict("alpha<(n-1)/p'", "alpha < (n-1)/p'", (nd - 1.0) / pr.pprime - pr.alpha));
  c.push_back(strict("beta<n/q+1", "beta < n/q + 1", nd / pr.q + 1.0 - pr.beta));
  c.push_back(weak("alpha+beta>=0", "alpha + beta >= 0", pr.alpha + pr.beta));
  c.push_back(weak("(n-1)/(np)+1/q'>=1", "(n-1)/(n p) + 1/q' >= 1",
                   (nd - 1.0) / (nd * pr.p) + 1.0 / pr.qprime - 1.0));
  return finish(std::move(c));
}

AdmissibilityReport check_system(const SystemExponents& s) {
  std::vector<Condition> c;
  const double nd = s.n;
  if (!finite_all({s.p0, s.q0, s.alpha, s.beta, s.gamma})) {
    c.push_back({"finite", "all exponents finite", -std::numeric_limits<double>::infinity(), false});
    return finish(std::move(c));
  }
  c.push_back(strict("p0>0", "p0 > 0", s.p0));
  c.push_back(strict("q0>0", "q0 > 0", s.q0));
  if (s.kind == SystemKind::DoubleWeighted) {
    c.push_back(equality("double weighted relation",
                         "(n-1)/(n(p0+1)) + 1/(q0+1) = (n+alpha+beta+1-gamma)/n",
                         (nd - 1.0) / (nd * (s.p0 + 1.0)) + 1.0 / (s.q0 + 1.0) -
                             (nd + s.alpha + s.beta + 1.0 - s.gamma) / nd));
  } else {
    c.push_back(equality("balance condition",
                         "(n-1-alpha)/(p0+1) + (n-beta)/(q0+1) = n+1-gamma",
                         (nd - 1.0 - s.alpha) / (s.p0 + 1.0) + (nd - s.beta) / (s.q0 + 1.0) -
                             (nd + 1.0 - s.gamma)));
  }
  return finish(std::move(c));
}

AsymptoticFlags check_asymptotic_hypothesis(const SystemExponents& s) {
  AsymptoticFlags f;
  if (!(s.p0 > 1.0 && s.q0 > 1.0)) return f;
  const double nd = s.n;
  f.boundary_ok = 1.0 / s.q0 - (nd + 1.0 + s.beta - s.gamma) / (s.q0 * nd) > (s.beta - 1.0) / nd;
  f.interior_ok =
      1.0 / s.p0 - (nd + 2.0 + s.alpha - s.gamma) / (s.p0 * (nd - 1.0)) > s.alpha / (nd - 1.0);
  return f;
}

SystemExponents system_from_params(const Params& pr) {
  SystemExponents s;
  s.p0 = 1.0 / (pr.p - 1.0);
  s.q0 = 1.0 / (pr.qprime - 1.0);
  s.kind = SystemKind::DoubleWeighted;
  s.alpha = pr.alpha;
  s.beta = pr.beta;
  s.gamma = pr.gamma;
  s.n = pr.n;
  return s;
}

Params params_for_system(const SystemExponents& s) {
  Params pr;
  pr.n = s.n;
  pr.alpha = s.alpha;
  pr.beta = s.beta;
  pr.gamma = s.gamma;
  pr.p = (s.p0 + 1.0) / s.p0;
  pr.pprime = s.p0 + 1.0;
  pr.qprime = (s.q0 + 1.0) / s.q0;
  pr.q = s.q0 + 1.0;
  pr.s_kernel = 0.5 * (s.n + 2.0 - s.gamma);
  return pr;
}

const char* system_kind_name(SystemKind kind) {
  return kind == SystemKind::DoubleWeighted ? "DoubleWeighted" : "SingleWeighted";
}

SystemKind parse_system_kind(const std::string& text) {
  if (text == "DoubleWeighted" || text == "double") return SystemKind::DoubleWeighted;
  if (text == "SingleWeighted" || text == "single") return SystemKind::SingleWeighted;
  throw Error(Errc::ParseError, "unknown system kind '" + text + "'");
}

double hardy_tail_integral(double R, double mu, int n) {
  if (!(R > 0.0)) throw Error(Errc::DomainError, "R must be positive");
  if (!(mu > n)) throw Error(Errc::DivergentIntegral, "tail integral needs mu > n");
  return 0.5 * unit_sphere_area(n) * std::pow(R, n - mu) / (mu - n);
}

double hardy_ball_integral(double R, double nu, int n) {
  if (!(R > 0.0)) throw Error(Errc::DomainError, "R must be positive");
  if (!(nu < n - 1)) throw Error(Errc::DivergentIntegral, "ball integral needs nu < n-1");
  return unit_sphere_area(n - 1) * std::pow(R, n - 1 - nu) / (n - 1 - nu);
}

double halfspace_ball_integral(double R, double mu, int n) {
  if (!(R > 0.0)) throw Error(Errc::DomainError, "R must be positive");
  if (!(mu < n)) throw Error(Errc::DivergentIntegral, "half-space ball integral needs mu < n");
  return 0.5 * unit_sphere_area(n) * std::pow(R, n - mu) / (n - mu);
}

double boundary_tail_integral(double R, double nu, int n) {
  if (!(R > 0.0)) throw Error(Errc::DomainError, "R must be positive");
  if (!(nu > n - 1)) throw Error(Errc::DivergentIntegral, "boundary tail integral needs nu > n-1");
  return unit_sphere_area(n - 1) * std::pow(R, n - 1 - nu) / (nu - (n - 1));
}

std::vector<HardyFactors> hardy_products(const Params& pr, std::span<const double> radii) {
  const int n = pr.n;
  // P1 weights: W = |x|^{-beta q-(n+1-gamma)q} outside the ball, U^{1-p'} = |xi|^{-alpha p'} inside.
  const double mu0 = pr.beta * pr.q + (n + 1.0 - pr.gamma) * pr.q;
  const double nu0 = pr.alpha * pr.p * (pr.pprime - 1.0);
  // P3 weights: W = |x|^{(1-beta)q} inside the ball, U^{1-p'} = |xi|^{-(n+2-gamma+alpha)p'} outside.
  const double mu1 = (pr.beta - 1.0) * pr.q;
  const double nu1 = (n + 2.0 - pr.gamma + pr.alpha) * pr.pprime;

  std::vector<HardyFactors> out;
  out.reserve(radii.size());
  for (double R : radii) {
    HardyFactors h;
    h.R = R;
    h.a0 = std::pow(hardy_tail_integral(R, mu0, n), 1.0 / pr.q) *
           std::pow(hardy_ball_integral(R, nu0, n), 1.0 / pr.pprime);
    h.a1 = std::pow(halfspace_ball_integral(R, mu1, n), 1.0 / pr.q) *
           std::pow(boundary_tail_integral(R, nu1, n), 1.0 / pr.pprime);
    out.push_back(h);
  }
  return out;
}

}  // namespace swpk
