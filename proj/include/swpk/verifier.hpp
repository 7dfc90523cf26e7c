#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swpk/admissibility.hpp"
#include "swpk/operators.hpp"
#include "swpk/profiles.hpp"

namespace swpk {

// One executable check. pass == (relative_gap <= tolerance) unless skipped,
// in which case pass is true and note says why.
struct VerificationRecord {
  std::string name;
  std::string inputs;
  double measured = 0.0;
  double reference = 0.0;
  double relative_gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

// max over lambda of | ||V(f^lambda)||_q / ||V(f)||_q - 1 |.
VerificationRecord verify_scaling(const BoundaryProfile& f, std::span<const double> lambdas, const OperatorContext& ctx,
                                  double tol = 1e-3);

// Seeded random trial pairs: rearranged log-normal bump mixtures for f, radial
// decreasing mixtures in |x| for g (every other trial uses g = optimal_g(f)).
// Passes when every ratio J / (|f|_p |g|_q') stays below C_est (1 + tol).
VerificationRecord verify_inequality(const OperatorContext& ctx, int trials, std::uint64_t seed, double C_est,
                                     double tol = 1e-2);

// max over the family of ||V(f)||_q / ||f||_{L^{p,q}}; zero profiles are skipped.
// Passes when the maximum is finite and below twice C_est.
VerificationRecord lorentz_probe(const OperatorContext& ctx, std::span<const BoundaryProfile> family, double C_est);

enum class AsymptoticSide { Boundary, Interior };

// Limit of u(eps) eps^alpha (boundary) or v(x)|x|^beta / x_n (interior) read at
// 10 r_min against the integral on the right-hand side. Throws
// HypothesisNotSatisfied when the hypothesis for that side fails.
VerificationRecord verify_asymptotics(const BoundaryProfile& u, const HalfSpaceProfile& v, const SystemExponents& sys,
                                      const OperatorContext& ctx, AsymptoticSide side, double tol = 5e-2);

// Both sides; a side whose hypothesis fails comes back skipped.
std::pair<VerificationRecord, VerificationRecord> verify_asymptotics(const BoundaryProfile& u,
                                                                     const HalfSpaceProfile& v,
                                                                     const SystemExponents& sys,
                                                                     const OperatorContext& ctx, double tol = 5e-2);

struct DecayEstimate {
  double a0 = 0.0;     // h ~ r^{-a0} near the inner end
  double a_inf = 0.0;  // h ~ r^{-a_inf} near the outer end
};

// Least-squares log-log slopes over the innermost and outermost decades.
// Throws InsufficientSupport when either decade has fewer than two nodes or
// holds values at the floating-point floor.
DecayEstimate estimate_decay(const BoundaryProfile& h);

// v restricted to the diagonal rho = t, as a radial profile in |x|.
BoundaryProfile diagonal_profile(const HalfSpaceProfile& v);

// Midpoints of the integrability intervals for u and v checked against the
// decay surrogate a0 < d/r < a_inf. measured is the worst margin.
VerificationRecord regularity_window_check(const BoundaryProfile& u, const HalfSpaceProfile& v,
                                           const SystemExponents& sys);

struct PohozaevRecords {
  VerificationRecord identity;  // LHS against RHS_a
  VerificationRecord balance;   // RHS_a against RHS_b
  VerificationRecord energy;    // E_u against E_v
};

// Throws PreconditionError unless sys is SingleWeighted and passes check_system.
PohozaevRecords verify_pohozaev(const BoundaryProfile& u, const HalfSpaceProfile& v, const SystemExponents& sys,
                                const OperatorContext& ctx, double tol = 1e-2, double energy_tol = 1e-3);

// Hardy products at several radii: largest relative spread of a0 and a1.
VerificationRecord verify_hardy(const Params& params, std::span<const double> radii, double tol = 1e-12);

// Grid quadrature of the kernel mass at the listed (rho, t) points against the
// closed form, on a decade grid over [r_min, r_max].
VerificationRecord verify_kernel_mass(int n, double gamma, std::span<const double> rhos, std::span<const double> ts,
                                      double r_min, double r_max, int nodes_per_decade, double tol = 1e-4);

// <g, V f> against <W g, f> for seeded random pairs.
VerificationRecord verify_adjoint(const OperatorContext& ctx, int pairs, std::uint64_t seed, double tol = 1e-10);

}  // namespace swpk
