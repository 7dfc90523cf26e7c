#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swpk/admissibility.hpp"
#include "swpk/lattice_kernel.hpp"
#include "swpk/profiles.hpp"

namespace swpk {

// Everything needed to apply V and W: parameters, the three grids (sharing one
// geometric lattice) and the kernel table built for them.
struct OperatorContext {
  Params params;
  RadialGrid boundary;
  RadialGrid rho;
  RadialGrid t;
  LatticeKernel kernel;
  int workers = 1;

  std::vector<double> boundary_measure;  // |S^{n-2}| w_i r_i^{n-2}
  std::vector<double> interior_measure;  // |S^{n-2}| w_j w_k rho_j^{n-2}
  std::vector<double> source_scale;      // r_i^{n-1-alpha-2s}
  std::vector<double> image_scale;       // t_k (rho_j^2 + t_k^2)^{-beta/2}
};

OperatorContext make_operator_context(const Params& params, RadialGrid boundary, RadialGrid rho, RadialGrid t,
                                      double tol = 1e-10, int workers = 1);

// Decade grids at nodes_per_decade: r and rho over [r_min, r_max], t over [t_min, t_max].
OperatorContext make_operator_context(const Params& params, double r_min, double r_max, double t_min,
                                      double t_max, int nodes_per_decade, double tol = 1e-10, int workers = 1);

HalfSpaceProfile apply_V(const BoundaryProfile& f, const OperatorContext& ctx);
BoundaryProfile apply_W(const HalfSpaceProfile& g, const OperatorContext& ctx);

double boundary_inner(const BoundaryProfile& a, const BoundaryProfile& b, const OperatorContext& ctx);
double interior_inner(const HalfSpaceProfile& a, const HalfSpaceProfile& b, const OperatorContext& ctx);
double functional_J(const BoundaryProfile& f, const HalfSpaceProfile& g, const OperatorContext& ctx);

BoundaryProfile zero_boundary(const OperatorContext& ctx);
HalfSpaceProfile zero_halfspace(const OperatorContext& ctx);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Stratified Monte-Carlo value of V(f)(x) with f extended by its piecewise
// linear interpolant in log r. Independent of the kernel table.
MonteCarloEstimate oracle_V_montecarlo(const BoundaryProfile& f, std::span<const double> x, const Params& params,
                                       std::int64_t samples, std::uint64_t seed);

}  // namespace swpk
