#pragma once

#include <span>
#include <string>
#include <vector>

namespace swpk {

// One parameter set (n, p, q', alpha, beta, gamma) together with the derived
// exponents. Built by derive_exponents; checked by check_admissible.
struct Params {
  int n = 3;
  double p = 2.0;
  double qprime = 1.5;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 2.0;
  double q = 3.0;
  double pprime = 2.0;
  double s_kernel = 1.5;
};

enum class SystemKind { DoubleWeighted, SingleWeighted };

struct SystemExponents {
  double p0 = 1.0;
  double q0 = 1.0;
  SystemKind kind = SystemKind::DoubleWeighted;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 2.0;
  int n = 3;
};

struct Condition {
  std::string name;
  std::string statement;
  double slack = 0.0;
  bool pass = false;
};

struct AdmissibilityReport {
  std::vector<Condition> conditions;
  bool overall_pass = false;
};

struct AsymptoticFlags {
  bool boundary_ok = false;
  bool interior_ok = false;
};

// Exact relations are accepted when the residual is below this.
inline constexpr double kRelationTol = 1e-12;

Params derive_exponents(int n, double p, double gamma, double alpha, double beta);
AdmissibilityReport check_admissible(const Params& params);
AdmissibilityReport check_system(const SystemExponents& sys);
AsymptoticFlags check_asymptotic_hypothesis(const SystemExponents& sys);

// Exponents of the Euler-Lagrange system attached to an extremal problem:
// p0 = 1/(p-1), q0 = 1/(q'-1), double weighted.
SystemExponents system_from_params(const Params& params);

// Params whose V/W operators drive the given system. The exponent relation of
// the inequality is not imposed: p = (p0+1)/p0 and q' = (q0+1)/q0.
Params params_for_system(const SystemExponents& sys);

const char* system_kind_name(SystemKind kind);
SystemKind parse_system_kind(const std::string& text);

// Integral of |x|^{-mu} over {|x| >= R, x_n > 0} in R^n.
double hardy_tail_integral(double R, double mu, int n);
// Integral of |xi|^{-nu} over {|xi| <= R} in R^{n-1}.
double hardy_ball_integral(double R, double nu, int n);
// Integral of |x|^{-mu} over {|x| <= R, x_n > 0} in R^n (needs mu < n).
double halfspace_ball_integral(double R, double mu, int n);
// Integral of |xi|^{-nu} over {|xi| >= R} in R^{n-1} (needs nu > n-1).
double boundary_tail_integral(double R, double nu, int n);

struct HardyFactors {
  double R = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
};

std::vector<HardyFactors> hardy_products(const Params& params, std::span<const double> radii);

}  // namespace swpk
