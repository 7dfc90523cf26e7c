#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swpk/quadrature.hpp"

namespace swpk {

// x_n (|x'-xi|^2 + x_n^2)^{-(n+2-gamma)/2}; n is x.size() and xi has n-1 entries.
double kernel_eval(std::span<const double> x, std::span<const double> xi, double gamma);

// A(r, rho, t): the kernel denominator integrated over the direction of xi on
// S^{n-2}. Evaluated by the hypergeometric series when it converges fast and by
// graded adaptive quadrature in the angle otherwise.
double angular_factor(double r, double rho, double t, int n, double gamma, double tol = 1e-10);

// Always uses the angular quadrature, reporting its error estimate.
QuadResult angular_factor_quadrature(double r, double rho, double t, int n, double gamma, double tol);

// Series |S^{n-2}| c^{-s} 2F1(s/2, (s+1)/2; (n-1)/2; z) with z = (2 r rho / c)^2.
// Only valid for z < 1; converges geometrically in z.
double angular_factor_series(double r, double rho, double t, int n, double gamma);

// Total boundary mass of the kernel at height t (2 <= gamma < 3).
double kernel_mass(double t, double gamma, int n);

struct KernelCache {
  std::vector<double> r_nodes;
  std::vector<double> rho_nodes;
  std::vector<double> t_nodes;
  std::vector<double> values;  // [(i * rho + j) * t + k]
  std::vector<double> errors;  // per entry error estimate, 0 where the series was used
  double s_kernel = 0.0;
  int n = 3;
  double gamma = 2.0;

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * rho_nodes.size() + j) * t_nodes.size() + k];
  }
};

KernelCache build_kernel_cache(std::span<const double> r_nodes, std::span<const double> rho_nodes,
                               std::span<const double> t_nodes, int n, double gamma, double tol,
                               int workers = 1);

// t * integral of A(r, rho_j, t_k) r^{n-2} dr over (0, inf) using the cache row as a
// quadrature with weights r_weights plus closed-form corrections for the parts
// below the first node and above the last one. Needs gamma < 3.
double kernel_row_mass(const KernelCache& cache, std::span<const double> r_weights, std::size_t j,
                       std::size_t k);

}  // namespace swpk
