#include "swpk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "swpk/error.hpp"
#include "swpk/geometry.hpp"
#include "swpk/kernel.hpp"

namespace swpk {

namespace {

// Several independent partial sums keep the multiply-add pipeline full.
inline double dot(const double* a, const double* b, std::size_t n) {
  constexpr std::size_t L = 16;
  double acc[L] = {};
  std::size_t i = 0;
  for (; i + L <= n; i += L) {
#pragma omp simd
    for (std::size_t l = 0; l < L; ++l) acc[l] += a[i + l] * b[i + l];
  }
  double s = 0.0;
  for (; i < n; ++i) s += a[i] * b[i];
  for (std::size_t l = 0; l < L; ++l) s += acc[l];
  return s;
}

inline void axpy(double c, const double* x, double* y, std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

template <class Fn>
void run_workers(int workers, std::size_t items, Fn&& fn) {
  const int nw = static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(std::max(1, workers), items)));
  if (nw == 1) {
    fn(0, items);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (items + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const std::size_t lo = std::min(items, w * chunk), hi = std::min(items, lo + chunk);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

void check_boundary(const BoundaryProfile& f, const OperatorContext& ctx) {
  if (f.n != ctx.params.n || !same_grid(f.grid, ctx.boundary))
    throw Error(Errc::GridMismatch, "boundary profile is not on the operator grid");
}

void check_interior(const HalfSpaceProfile& g, const OperatorContext& ctx) {
  if (g.n != ctx.params.n || !same_grid(g.rho_grid, ctx.rho) || !same_grid(g.t_grid, ctx.t))
    throw Error(Errc::GridMismatch, "interior profile is not on the operator grids");
}

}  // namespace

OperatorContext make_operator_context(const Params& params, RadialGrid boundary, RadialGrid rho, RadialGrid t,
                                      double tol, int workers) {
  if (params.n < 3) throw Error(Errc::PreconditionError, "dimension must be at least 3");
  OperatorContext ctx;
  ctx.params = params;
  ctx.workers = std::max(1, workers);
  LatticeLayout L;
  L.log_step = boundary.log_step;
  L.r_count = static_cast<std::int64_t>(boundary.size());
  L.rho_offset = lattice_offset(boundary, rho);
  L.rho_count = static_cast<std::int64_t>(rho.size());
  L.t_offset = lattice_offset(boundary, t);
  L.t_count = static_cast<std::int64_t>(t.size());
  ctx.kernel = build_lattice_kernel(L, params.n, params.gamma, params.alpha, tol, ctx.workers);

  const int n = params.n;
  const double two_s = n + 2.0 - params.gamma;
  ctx.boundary_measure = boundary_node_measure(boundary, n);
  ctx.interior_measure = interior_node_measure(rho, t, n);
  ctx.source_scale.resize(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i)
    ctx.source_scale[i] = std::pow(boundary.nodes[i], n - 1.0 - params.alpha - two_s);
  ctx.image_scale.resize(rho.size() * t.size());
  for (std::size_t j = 0; j < rho.size(); ++j)
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double r2 = rho.nodes[j] * rho.nodes[j] + t.nodes[k] * t.nodes[k];
      ctx.image_scale[j * t.size() + k] = t.nodes[k] * std::pow(r2, -0.5 * params.beta);
    }
  ctx.boundary = std::move(boundary);
  ctx.rho = std::move(rho);
  ctx.t = std::move(t);
  return ctx;
}

OperatorContext make_operator_context(const Params& params, double r_min, double r_max, double t_min,
                                      double t_max, int nodes_per_decade, double tol, int workers) {
  return make_operator_context(params, make_decade_grid(r_min, r_max, nodes_per_decade),
                               make_decade_grid(r_min, r_max, nodes_per_decade),
                               make_decade_grid(t_min, t_max, nodes_per_decade), tol, workers);
}

BoundaryProfile zero_boundary(const OperatorContext& ctx) {
  BoundaryProfile f;
  f.grid = ctx.boundary;
  f.n = ctx.params.n;
  f.values.assign(ctx.boundary.size(), 0.0);
  return f;
}

HalfSpaceProfile zero_halfspace(const OperatorContext& ctx) {
  HalfSpaceProfile g;
  g.rho_grid = ctx.rho;
  g.t_grid = ctx.t;
  g.n = ctx.params.n;
  g.values.assign(ctx.rho.size() * ctx.t.size(), 0.0);
  return g;
}

HalfSpaceProfile apply_V(const BoundaryProfile& f, const OperatorContext& ctx) {
  check_boundary(f, ctx);
  const std::size_t Nr = ctx.boundary.size(), Nj = ctx.rho.size(), Nk = ctx.t.size();
  const LatticeKernel& K = ctx.kernel;
  // Reversed so that the table row is read forwards.
  std::vector<double> hrev(Nr);
  for (std::size_t i = 0; i < Nr; ++i) hrev[Nr - 1 - i] = f.values[i] * ctx.source_scale[i];
  const double h_first = hrev[Nr - 1], h_last = hrev[0];

  HalfSpaceProfile g = zero_halfspace(ctx);
  // Points with the same k - j read the same table row at consecutive offsets,
  // so walking one row at a time keeps it in cache.
  const std::size_t rows = Nj + Nk - 1;
  run_workers(ctx.workers, rows, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t m = lo; m < hi; ++m) {
      const double* row = K.table.data() + m * K.a_count;
      // row m holds the pairs with k = m + j - (Nj - 1)
      const std::size_t jlo = m >= Nk ? m - Nk + 1 : 0, jhi = std::min(Nj - 1, m);
      for (std::size_t jj = jlo; jj <= jhi; ++jj) {
        const std::size_t j = Nj - 1 - jj, k = m - jj;
        const std::size_t jk = j * Nk + k;
        const double s = dot(hrev.data(), row + j, Nr) - h_first * K.first_outer[jk] - h_last * K.last_outer[jk];
        g.values[jk] = ctx.image_scale[jk] * s;
      }
    }
  });
  return g;
}

BoundaryProfile apply_W(const HalfSpaceProfile& g, const OperatorContext& ctx) {
  check_interior(g, ctx);
  const std::size_t Nr = ctx.boundary.size(), Nj = ctx.rho.size(), Nk = ctx.t.size();
  const LatticeKernel& K = ctx.kernel;
  std::vector<double> G(Nj * Nk);
  double first = 0.0, last = 0.0;
  for (std::size_t jk = 0; jk < G.size(); ++jk) {
    G[jk] = g.values[jk] * ctx.image_scale[jk] * ctx.interior_measure[jk];
    first += G[jk] * K.first_outer[jk];
    last += G[jk] * K.last_outer[jk];
  }
  std::vector<double> acc(Nr, 0.0);  // reversed node order
  // Workers own disjoint blocks of output nodes and visit (j, k) in the same
  // order, so the result does not depend on the worker count.
  run_workers(ctx.workers, Nr, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t m = 0; m < Nj + Nk - 1; ++m) {
      const double* row = K.table.data() + m * K.a_count;
      const std::size_t jlo = m >= Nk ? m - Nk + 1 : 0, jhi = std::min(Nj - 1, m);
      for (std::size_t jj = jlo; jj <= jhi; ++jj) {
        const std::size_t j = Nj - 1 - jj, k = m - jj;
        const double c = G[j * Nk + k];
        if (c == 0.0) continue;
        axpy(c, row + j + lo, acc.data() + lo, hi - lo);
      }
    }
  });
  BoundaryProfile f = zero_boundary(ctx);
  for (std::size_t i = 0; i < Nr; ++i) {
    double s = acc[Nr - 1 - i];
    if (i == 0) s -= first;
    if (i == Nr - 1) s -= last;
    f.values[i] = ctx.source_scale[i] / ctx.boundary_measure[i] * s;
  }
  return f;
}

double boundary_inner(const BoundaryProfile& a, const BoundaryProfile& b, const OperatorContext& ctx) {
  check_boundary(a, ctx);
  check_boundary(b, ctx);
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += ctx.boundary_measure[i] * a.values[i] * b.values[i];
  return s;
}

double interior_inner(const HalfSpaceProfile& a, const HalfSpaceProfile& b, const OperatorContext& ctx) {
  check_interior(a, ctx);
  check_interior(b, ctx);
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += ctx.interior_measure[i] * a.values[i] * b.values[i];
  return s;
}

double functional_J(const BoundaryProfile& f, const HalfSpaceProfile& g, const OperatorContext& ctx) {
  return interior_inner(g, apply_V(f, ctx), ctx);
}

MonteCarloEstimate oracle_V_montecarlo(const BoundaryProfile& f, std::span<const double> x, const Params& params,
                                       std::int64_t samples, std::uint64_t seed) {
  const int n = params.n;
  if (static_cast<int>(x.size()) != n || f.n != n) throw Error(Errc::DomainError, "point dimension mismatch");
  if (!(x[n - 1] > 0.0)) throw Error(Errc::DomainError, "x_n must be positive");
  if (samples < 1) throw Error(Errc::DomainError, "need a positive sample count");
  MonteCarloEstimate out;
  const auto& r = f.grid.nodes;
  const std::size_t cells = r.size() - 1;
  const std::int64_t per = std::max<std::int64_t>(2, samples / static_cast<std::int64_t>(cells));
  const double area = unit_sphere_area(n - 1);
  const double e = n - 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(n - 1);
  double total = 0.0, var = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (f.values[c] == 0.0 && f.values[c + 1] == 0.0) continue;
    const double a = std::pow(r[c], e), b = std::pow(r[c + 1], e);
    const double measure = area * (b - a) / e;
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t s = 0; s < per; ++s) {
      const double rad = std::pow(a + unif(rng) * (b - a), 1.0 / e);
      double norm2 = 0.0;
      for (auto& v : xi) {
        v = normal(rng);
        norm2 += v * v;
      }
      const double scale = rad / std::sqrt(norm2);
      for (auto& v : xi) v *= scale;
      const double val =
          std::pow(rad, -params.alpha) * kernel_eval(x, xi, params.gamma) * interpolate_linear_log(f, rad);
      const double d = val - mean;
      mean += d / static_cast<double>(s + 1);
      m2 += d * (val - mean);
    }
    total += measure * mean;
    var += measure * measure * (m2 / static_cast<double>(per - 1)) / static_cast<double>(per);
  }
  double xn2 = 0.0;
  for (double v : x) xn2 += v * v;
  const double wb = std::pow(xn2, -0.5 * params.beta);
  out.estimate = wb * total;
  out.stderr_ = wb * std::sqrt(var);
  return out;
}

}  // namespace swpk
