#pragma once

// Kernel weights for operators on geometric grids that share one lattice.
//
// Boundary data are extended between nodes by the hat-function interpolant in
// u = log r, so the image at (rho, t) is an exact sum over nodes of
//
//   K_i(rho, t) = int phi_i(u) e^{(n-1-alpha)u} A(e^u, rho, t) du.
//
// Homogeneity of A gives K_i = r_i^{n-1-alpha-2s} K(a, b) where a and b are the
// lattice index differences of rho and t relative to r_i, so one table indexed by
// (m = b - a, a) serves every node. The first and last node only carry the
// inner half of their hat; the outer halves are kept separately and subtracted.

#include <cstdint>
#include <vector>

namespace swpk {

struct LatticeLayout {
  double log_step = 0.0;
  std::int64_t r_count = 0;
  std::int64_t rho_offset = 0;  // rho_j = r_0 q^{rho_offset + j}
  std::int64_t rho_count = 0;
  std::int64_t t_offset = 0;  // t_k = r_0 q^{t_offset + k}
  std::int64_t t_count = 0;
};

struct LatticeKernel {
  LatticeLayout layout;
  int n = 3;
  double gamma = 2.0;
  double alpha = 0.0;
  std::int64_t a_min = 0, a_count = 0;
  std::int64_t m_min = 0, m_count = 0;
  std::vector<double> table;        // [(m - m_min) * a_count + (a - a_min)], full hats
  std::vector<double> first_outer;  // [j * t_count + k]: half hat of node 0 below r_0
  std::vector<double> last_outer;   // half hat of the last node above r_max
  std::size_t entries = 0;
  std::size_t adaptive_entries = 0;
  std::size_t failed_entries = 0;
  double max_rel_error = 0.0;

  const double* row(std::int64_t m) const { return table.data() + (m - m_min) * a_count; }
};

LatticeKernel build_lattice_kernel(const LatticeLayout& layout, int n, double gamma, double alpha,
                                   double tol = 1e-10, int workers = 1);

struct HatWeights {
  double left = 0.0;   // v in [-h, 0], weight 1 + v/h
  double right = 0.0;  // v in [0, h], weight 1 - v/h
  double error = 0.0;
  bool adaptive = false;
  bool failed = false;
};

// The two half-hat integrals of entry (a, b) for a unit node r = 1.
HatWeights lattice_hat_weights(std::int64_t a, std::int64_t b, double log_step, int n, double gamma,
                               double alpha, double tol = 1e-10);

}  // namespace swpk
