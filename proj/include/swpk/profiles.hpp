#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace swpk {

// Geometric nodes with trapezoid weights in log r: integral f dr ~ sum w_i f(r_i),
// w_i = h r_i in the interior and h r_i / 2 at both ends. Functions are taken
// to vanish outside [r_min, r_max].
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double log_step = 0.0;

  std::size_t size() const { return nodes.size(); }
  double front() const { return nodes.front(); }
  double back() const { return nodes.back(); }
};

RadialGrid make_log_grid(double r_min, double r_max, int count);

// Nodes on the lattice 10^{k/npd} covering [r_min, r_max] (endpoints rounded to
// the nearest lattice point). Grids built this way at the same npd align.
RadialGrid make_decade_grid(double r_min, double r_max, int nodes_per_decade);

bool same_grid(const RadialGrid& a, const RadialGrid& b);

// Index of other.nodes[0] on the lattice of base (other.nodes[0] = base.nodes[0] q^offset).
// Throws GridMismatch when the steps differ or the offset is not an integer.
std::int64_t lattice_offset(const RadialGrid& base, const RadialGrid& other);

struct BoundaryProfile {
  RadialGrid grid;
  std::vector<double> values;
  int n = 3;
  bool decreasing = false;
};

// values[j * t_grid.size() + k] = g(rho_j, t_k)
struct HalfSpaceProfile {
  RadialGrid rho_grid;
  RadialGrid t_grid;
  std::vector<double> values;
  int n = 3;

  double at(std::size_t j, std::size_t k) const { return values[j * t_grid.size() + k]; }
};

struct LorentzIndices {
  double p = 2.0;
  double s = 2.0;  // infinity allowed
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Boundary measure carried by node i: |S^{n-2}| w_i r_i^{n-2} in the interior,
// the exact mass of the inner half hat at the two end nodes.
std::vector<double> boundary_node_measure(const RadialGrid& grid, int n);
// rho measure times w_k, laid out like HalfSpaceProfile::values. The k = 0 row
// also carries the slab 0 < t < t_0.
std::vector<double> interior_node_measure(const RadialGrid& rho, const RadialGrid& t, int n);

double boundary_norm(const BoundaryProfile& f, double p);
double halfspace_norm(const HalfSpaceProfile& g, double qprime);

BoundaryProfile decreasing_rearrangement(const BoundaryProfile& f);

// Distribution of f as a step function of boundary measure: values sorted
// decreasingly with the cumulative measure at the end of each step.
struct LevelSteps {
  std::vector<double> values;
  std::vector<double> cumulative_mass;
};
LevelSteps level_steps(const BoundaryProfile& f);

double lorentz_norm(const BoundaryProfile& f, LorentzIndices idx);

BoundaryProfile dilate(const BoundaryProfile& f, double lambda, double p);

// Integer lattice shift: f(r_i) <- q^{-shift(n-1)/p} f(r_{i-shift}), the dilation by
// lambda = q^shift without interpolation. Nodes whose source lies below the grid
// get 0, or the innermost value when hold_inner is set.
BoundaryProfile shift_profile(const BoundaryProfile& f, std::int64_t shift, double p, bool hold_inner = false);

double radial_bound_check(const BoundaryProfile& f, double p);

// Radius where the cumulative measure of f^p reaches half its total.
double half_mass_radius(const BoundaryProfile& f, double p);

// Share of the p-mass of f sitting in the outermost / innermost decade of the grid.
struct TruncationDiag {
  double inner = 0.0;
  double outer = 0.0;
};
TruncationDiag truncation_diag(const BoundaryProfile& f, double p);
// For interior profiles "outer" is the share with rho or t in the top decade
// and "inner" the share with t in the bottom decade.
TruncationDiag truncation_diag(const HalfSpaceProfile& g, double q);

// Zero-extended piecewise linear interpolant in log r, as used by the operators.
double interpolate_linear_log(const BoundaryProfile& f, double r);

BoundaryProfile make_boundary_profile(const RadialGrid& grid, int n, const std::function<double(double)>& fn);

}  // namespace swpk
