#include "swpk/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "angular.hpp"
#include "swpk/error.hpp"
#include "swpk/geometry.hpp"

namespace swpk {

double kernel_eval(std::span<const double> x, std::span<const double> xi, double gamma) {
  const std::size_t n = x.size();
  if (n < 2 || xi.size() + 1 != n) throw Error(Errc::DomainError, "point dimensions do not match");
  const double xn = x[n - 1];
  if (!(xn > 0.0)) throw Error(Errc::DomainError, "x_n must be positive");
  double d2 = xn * xn;
  for (std::size_t i = 0; i + 1 < n; ++i) d2 += (x[i] - xi[i]) * (x[i] - xi[i]);
  return xn * std::pow(d2, -0.5 * (static_cast<double>(n) + 2.0 - gamma));
}

double angular_factor(double r, double rho, double t, int n, double gamma, double tol) {
  if (!(r >= 0.0) || !(rho >= 0.0) || !(t > 0.0))
    throw Error(Errc::DomainError, "angular factor needs r, rho >= 0 and t > 0");
  detail::AngularEvaluator ev(n, gamma);
  bool failed = false;
  const double v = ev.value(r, rho, t, tol, nullptr, &failed);
  if (failed) throw Error(Errc::QuadratureFailure, "angular quadrature did not reach tolerance");
  return v;
}

QuadResult angular_factor_quadrature(double r, double rho, double t, int n, double gamma, double tol) {
  if (!(r >= 0.0) || !(rho >= 0.0) || !(t > 0.0))
    throw Error(Errc::DomainError, "angular factor needs r, rho >= 0 and t > 0");
  return detail::AngularEvaluator(n, gamma).quadrature(r, rho, t, tol);
}

double angular_factor_series(double r, double rho, double t, int n, double gamma) {
  if (!(r >= 0.0) || !(rho >= 0.0) || !(t > 0.0))
    throw Error(Errc::DomainError, "angular factor needs r, rho >= 0 and t > 0");
  return detail::AngularEvaluator(n, gamma).series(r, rho, t);
}

double kernel_mass(double t, double gamma, int n) {
  if (!(t > 0.0)) throw Error(Errc::DomainError, "t must be positive");
  if (!(gamma < 3.0)) throw Error(Errc::DomainError, "kernel mass diverges for gamma >= 3");
  const double s = 0.5 * (n + 2.0 - gamma);
  return std::pow(std::numbers::pi, 0.5 * (n - 1)) * std::tgamma(0.5 * (3.0 - gamma)) / std::tgamma(s) *
         std::pow(t, gamma - 2.0);
}

KernelCache build_kernel_cache(std::span<const double> r_nodes, std::span<const double> rho_nodes,
                               std::span<const double> t_nodes, int n, double gamma, double tol,
                               int workers) {
  auto increasing = [](std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!increasing(r_nodes) || !increasing(rho_nodes) || !increasing(t_nodes))
    throw Error(Errc::BadGrid, "cache nodes must be strictly increasing");
  if (!t_nodes.empty() && !(t_nodes.front() > 0.0)) throw Error(Errc::BadGrid, "t nodes must be positive");
  if ((!r_nodes.empty() && r_nodes.front() < 0.0) || (!rho_nodes.empty() && rho_nodes.front() < 0.0))
    throw Error(Errc::BadGrid, "radial nodes must be nonnegative");

  KernelCache c;
  c.r_nodes.assign(r_nodes.begin(), r_nodes.end());
  c.rho_nodes.assign(rho_nodes.begin(), rho_nodes.end());
  c.t_nodes.assign(t_nodes.begin(), t_nodes.end());
  c.n = n;
  c.gamma = gamma;
  c.s_kernel = 0.5 * (n + 2.0 - gamma);
  const std::size_t ni = r_nodes.size(), nj = rho_nodes.size(), nk = t_nodes.size();
  c.values.assign(ni * nj * nk, 0.0);
  c.errors.assign(ni * nj * nk, 0.0);

  const detail::AngularEvaluator ev(n, gamma);
  const int nw = std::max(1, workers);
  std::vector<std::ptrdiff_t> failure(nw, -1);
  auto work = [&](int w) {
    for (std::size_t i = w; i < ni; i += nw) {
      for (std::size_t j = 0; j < nj; ++j) {
        for (std::size_t k = 0; k < nk; ++k) {
          const std::size_t idx = (i * nj + j) * nk + k;
          bool failed = false;
          c.values[idx] = ev.value(c.r_nodes[i], c.rho_nodes[j], c.t_nodes[k], tol, &c.errors[idx], &failed);
          if (failed && failure[w] < 0) failure[w] = static_cast<std::ptrdiff_t>(idx);
        }
      }
    }
  };
  if (nw == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::ptrdiff_t bad = -1;
  for (auto f : failure)
    if (f >= 0 && (bad < 0 || f < bad)) bad = f;
  if (bad >= 0) {
    const std::size_t k = bad % nk, j = (bad / nk) % nj, i = bad / (nk * nj);
    throw Error(Errc::QuadratureFailure, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                             std::to_string(k) + ") missed the tolerance");
  }
  return c;
}

double kernel_row_mass(const KernelCache& cache, std::span<const double> r_weights, std::size_t j,
                       std::size_t k) {
  if (r_weights.size() != cache.r_nodes.size()) throw Error(Errc::GridMismatch, "weights do not match r nodes");
  if (!(cache.gamma < 3.0)) throw Error(Errc::DomainError, "kernel mass diverges for gamma >= 3");
  const int n = cache.n;
  const double s = cache.s_kernel;
  const double rho = cache.rho_nodes[j], t = cache.t_nodes[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < cache.r_nodes.size(); ++i)
    sum += r_weights[i] * std::pow(cache.r_nodes[i], n - 2) * cache(i, j, k);

  // Below the first node A is essentially A(0, rho, t).
  const double r0 = cache.r_nodes.front();
  const double a0 = unit_sphere_area(n - 1) * std::pow(rho * rho + t * t, -s);
  sum += a0 * std::pow(r0, n - 1) / (n - 1);

  // Above the last node: A ~ |S^{n-2}| r^{-2s} (1 + C/r^2) with the two leading
  // terms of the expansion in 1/r.
  const double R = cache.r_nodes.back();
  const double kappa = (0.5 * s) * (0.5 * (s + 1.0)) / (0.5 * (n - 1.0));
  const double C = 4.0 * kappa * rho * rho - s * (rho * rho + t * t);
  sum += unit_sphere_area(n - 1) * (std::pow(R, n - 1 - 2 * s) / (2 * s - n + 1) +
                                    C * std::pow(R, n - 3 - 2 * s) / (2 * s - n + 3));
  return t * sum;
}

}  // namespace swpk
