#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swpk/admissibility.hpp"
#include "swpk/operators.hpp"
#include "swpk/profiles.hpp"

namespace swpk {

enum class ScaleFix { HalfMassRadius, None };
enum class InitKind { PowerLawBump, Indicator, FromFile };

const char* scale_fix_name(ScaleFix s);
const char* init_kind_name(InitKind k);
ScaleFix parse_scale_fix(const std::string& text);
InitKind parse_init_kind(const std::string& text);

struct SolveOptions {
  int max_iters = 400;
  double tol_J = 1e-12;
  double tol_res = 1e-9;
  ScaleFix scale_fix = ScaleFix::HalfMassRadius;
  InitKind init = InitKind::PowerLawBump;
  std::optional<BoundaryProfile> init_profile;  // used with FromFile
};

struct SolveReport {
  BoundaryProfile f_star;
  HalfSpaceProfile g_star;
  double C_est = 0.0;
  std::vector<double> J_history;
  std::array<double, 2> el_residual{0.0, 0.0};
  TruncationDiag truncation_boundary;
  TruncationDiag truncation_interior;
  bool converged = false;
  int iterations = 0;
  double stationarity = 0.0;  // relative sup change of g over the last sweep
  long scale_shift = 0;       // total lattice cells moved by the scale fix
};

HalfSpaceProfile optimal_g(const BoundaryProfile& f, const OperatorContext& ctx);
BoundaryProfile optimal_f(const HalfSpaceProfile& g, const OperatorContext& ctx);

// Alternating maximization of J over the unit spheres of L^p and L^{q'}.
// Throws PreconditionError for inadmissible params or p >= q.
SolveReport solve_extremal(const OperatorContext& ctx, const SolveOptions& opts);

struct SystemSolution {
  BoundaryProfile u;
  HalfSpaceProfile v;
  SolveReport report;
};

SystemSolution solve_system(const SystemExponents& sys, const OperatorContext& ctx, const SolveOptions& opts);

// Relative sup deviations of u and v from the right-hand sides of the system.
std::array<double, 2> el_residual(const BoundaryProfile& u, const HalfSpaceProfile& v, const SystemExponents& sys,
                                  const OperatorContext& ctx);

// Right-hand sides of the system: T1(v^{q0}) on the boundary and T2(u^{p0}) inside.
BoundaryProfile system_T1(const HalfSpaceProfile& v, const SystemExponents& sys, const OperatorContext& ctx);
HalfSpaceProfile system_T2(const BoundaryProfile& u, const SystemExponents& sys, const OperatorContext& ctx);

// u = c1 f^{p-1}, v = c2 g^{q'-1} with the constants that turn a stationary
// extremal pair with value J into a solution of the double weighted system.
SystemSolution extremal_to_system(const BoundaryProfile& f, const HalfSpaceProfile& g, double J,
                                  const SystemExponents& sys);

BoundaryProfile initial_profile(const OperatorContext& ctx, const SolveOptions& opts, double p);

}  // namespace swpk
