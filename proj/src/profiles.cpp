#include "swpk/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swpk/error.hpp"
#include "swpk/geometry.hpp"

namespace swpk {

namespace {

void fill_weights(RadialGrid& g) {
  const std::size_t m = g.nodes.size();
  g.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) g.weights[i] = g.log_step * g.nodes[i];
  g.weights.front() *= 0.5;
  g.weights.back() *= 0.5;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

}  // namespace

RadialGrid make_log_grid(double r_min, double r_max, int count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max) || count < 2)
    throw Error(Errc::BadGrid, "need 0 < r_min < r_max and at least two nodes");
  RadialGrid g;
  g.log_step = std::log(r_max / r_min) / (count - 1);
  const double l0 = std::log(r_min);
  g.nodes.resize(count);
  for (int i = 0; i < count; ++i) g.nodes[i] = std::exp(l0 + i * g.log_step);
  g.nodes.front() = r_min;
  g.nodes.back() = r_max;
  fill_weights(g);
  return g;
}

RadialGrid make_decade_grid(double r_min, double r_max, int nodes_per_decade) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max) || nodes_per_decade < 1)
    throw Error(Errc::BadGrid, "need 0 < r_min < r_max and a positive node density");
  const long k0 = std::lround(std::log10(r_min) * nodes_per_decade);
  const long k1 = std::lround(std::log10(r_max) * nodes_per_decade);
  if (k1 - k0 < 1) throw Error(Errc::BadGrid, "range shorter than one lattice step");
  RadialGrid g;
  g.log_step = std::log(10.0) / nodes_per_decade;
  for (long k = k0; k <= k1; ++k) g.nodes.push_back(std::exp(static_cast<double>(k) * g.log_step));
  fill_weights(g);
  return g;
}

bool same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    if (std::abs(a.nodes[i] - b.nodes[i]) > 1e-12 * a.nodes[i]) return false;
  return true;
}

std::int64_t lattice_offset(const RadialGrid& base, const RadialGrid& other) {
  if (std::abs(base.log_step - other.log_step) > 1e-9 * base.log_step)
    throw Error(Errc::GridMismatch, "grids have different log steps");
  const double off = std::log(other.nodes.front() / base.nodes.front()) / base.log_step;
  const double k = std::round(off);
  if (std::abs(off - k) > 1e-6) throw Error(Errc::GridMismatch, "grids are not on a common lattice");
  return static_cast<std::int64_t>(k);
}

std::vector<double> boundary_node_measure(const RadialGrid& grid, int n) {
  const double area = unit_sphere_area(n - 1);
  std::vector<double> mu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    mu[i] = area * grid.weights[i] * std::pow(grid.nodes[i], n - 2);
  // End nodes carry the exact mass of their inner half hats in log r, so that
  // the lumped measure matches the interpolant the operators act on.
  const double c = n - 1.0, h = grid.log_step;
  if (grid.size() >= 2 && h > 0.0) {
    mu.front() = area * std::pow(grid.nodes.front(), c) * (std::expm1(c * h) - c * h) / (c * c * h);
    mu.back() = area * std::pow(grid.nodes.back(), c) * (std::expm1(-c * h) + c * h) / (c * c * h);
  }
  return mu;
}

std::vector<double> interior_node_measure(const RadialGrid& rho, const RadialGrid& t, int n) {
  const double area = unit_sphere_area(n - 1);
  std::vector<double> om(rho.size() * t.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double wj = area * rho.weights[j] * std::pow(rho.nodes[j], n - 2);
    for (std::size_t k = 0; k < t.size(); ++k) om[j * t.size() + k] = wj * t.weights[k];
    // The slab 0 < t < t_min is carried by the first layer at its value there.
    om[j * t.size()] += wj * t.nodes.front();
  }
  return om;
}

double boundary_norm(const BoundaryProfile& f, double p) {
  const auto mu = boundary_node_measure(f.grid, f.n);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu[i] * std::pow(std::abs(f.values[i]), p);
  return std::pow(s, 1.0 / p);
}

double halfspace_norm(const HalfSpaceProfile& g, double qprime) {
  const auto om = interior_node_measure(g.rho_grid, g.t_grid, g.n);
  double s = 0.0;
  for (std::size_t i = 0; i < om.size(); ++i) s += om[i] * std::pow(std::abs(g.values[i]), qprime);
  return std::pow(s, 1.0 / qprime);
}

LevelSteps level_steps(const BoundaryProfile& f) {
  const auto mu = boundary_node_measure(f.grid, f.n);
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.values[a] > f.values[b]; });
  LevelSteps st;
  st.values.reserve(order.size());
  st.cumulative_mass.reserve(order.size());
  double m = 0.0;
  for (std::size_t i : order) {
    m += mu[i];
    st.values.push_back(f.values[i]);
    st.cumulative_mass.push_back(m);
  }
  return st;
}

BoundaryProfile decreasing_rearrangement(const BoundaryProfile& f) {
  BoundaryProfile out = f;
  out.decreasing = true;
  if (nonincreasing(f.values)) return out;

  // Average the sorted step function over the measure carried by each node,
  // walking both partitions of [0, total] in order.
  const auto mu = boundary_node_measure(f.grid, f.n);
  const LevelSteps st = level_steps(f);
  std::size_t k = 0;
  double lo = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double hi = lo + mu[i];
    double acc = 0.0;
    double a = lo;
    while (k < st.values.size()) {
      const double b = std::min(hi, st.cumulative_mass[k]);
      if (b > a) acc += st.values[k] * (b - a);
      a = std::max(a, b);
      if (st.cumulative_mass[k] <= hi) {
        ++k;
      } else {
        break;
      }
    }
    out.values[i] = acc / mu[i];
    lo = hi;
  }
  // Rounding in the averages must not break monotonicity.
  for (std::size_t i = 1; i < out.values.size(); ++i) out.values[i] = std::min(out.values[i], out.values[i - 1]);
  return out;
}

double lorentz_norm(const BoundaryProfile& f, LorentzIndices idx) {
  if (!(idx.p > 0.0) || !(idx.s > 0.0)) throw Error(Errc::DomainError, "Lorentz indices must be positive");
  const LevelSteps st = level_steps(f);
  if (std::isinf(idx.s)) {
    double best = 0.0;
    for (std::size_t k = 0; k < st.values.size(); ++k)
      best = std::max(best, std::pow(st.cumulative_mass[k], 1.0 / idx.p) * st.values[k]);
    return best;
  }
  const double e = idx.s / idx.p;
  double sum = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < st.values.size(); ++k) {
    const double cur = std::pow(st.cumulative_mass[k], e);
    if (st.values[k] > 0.0) sum += std::pow(st.values[k], idx.s) * (cur - prev);
    prev = cur;
  }
  return std::pow(sum / e, 1.0 / idx.s);
}

double interpolate_linear_log(const BoundaryProfile& f, double r) {
  const auto& g = f.grid;
  if (!(r >= g.front()) || !(r <= g.back())) return 0.0;
  const double u = std::log(r / g.front()) / g.log_step;
  std::size_t i = static_cast<std::size_t>(std::floor(u));
  if (i + 1 >= g.size()) return f.values.back();
  const double fr = u - static_cast<double>(i);
  return (1.0 - fr) * f.values[i] + fr * f.values[i + 1];
}

BoundaryProfile dilate(const BoundaryProfile& f, double lambda, double p) {
  if (!(lambda > 0.0)) throw Error(Errc::DomainError, "dilation factor must be positive");
  BoundaryProfile out = f;
  const auto& g = f.grid;
  const std::size_t m = g.size();
  const double amp = std::pow(lambda, -(f.n - 1.0) / p);
  const double shift = std::log(lambda) / g.log_step;
  const double ks = std::round(shift);
  if (std::abs(shift - ks) < 1e-9) return shift_profile(f, static_cast<std::int64_t>(ks), p, false);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = static_cast<double>(i) - shift;
    double v = 0.0;
    if (u >= 0.0 && u <= static_cast<double>(m - 1)) {
      std::size_t lo = static_cast<std::size_t>(std::floor(u));
      if (lo + 1 >= m) lo = m - 2;
      const double fr = u - static_cast<double>(lo);
      const double a = f.values[lo], b = f.values[lo + 1];
      if (a > 0.0 && b > 0.0) {
        v = std::exp((1.0 - fr) * std::log(a) + fr * std::log(b));
      } else {
        v = (1.0 - fr) * a + fr * b;
      }
    }
    out.values[i] = amp * v;
  }
  out.decreasing = f.decreasing && nonincreasing(out.values);
  return out;
}

BoundaryProfile shift_profile(const BoundaryProfile& f, std::int64_t shift, double p, bool hold_inner) {
  BoundaryProfile out = f;
  const std::int64_t m = static_cast<std::int64_t>(f.values.size());
  const double amp = std::exp(-static_cast<double>(shift) * f.grid.log_step * (f.n - 1.0) / p);
  for (std::int64_t i = 0; i < m; ++i) {
    std::int64_t src = i - shift;
    if (hold_inner && src < 0) src = 0;
    out.values[i] = (src >= 0 && src < m) ? amp * f.values[src] : 0.0;
  }
  out.decreasing = f.decreasing && nonincreasing(out.values);
  return out;
}

double radial_bound_check(const BoundaryProfile& f, double p) {
  if (!f.decreasing) throw Error(Errc::PreconditionError, "profile is not flagged decreasing");
  const double nrm = boundary_norm(f, p);
  if (std::abs(nrm - 1.0) > 1e-6) throw Error(Errc::PreconditionError, "profile is not unit norm");
  const double c = std::pow(unit_ball_volume(f.n - 1), 1.0 / p);
  double worst = -kInf;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    worst = std::max(worst, f.values[i] * c * std::pow(f.grid.nodes[i], (f.n - 1.0) / p) - 1.0);
  return worst;
}

double half_mass_radius(const BoundaryProfile& f, double p) {
  const auto mu = boundary_node_measure(f.grid, f.n);
  std::vector<double> cum(mu.size());
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu[i] * std::pow(std::abs(f.values[i]), p);
    cum[i] = s;
  }
  if (!(s > 0.0)) throw Error(Errc::ZeroImage, "half-mass radius of a zero profile");
  const double half = 0.5 * s;
  std::size_t i = 0;
  while (cum[i] < half) ++i;
  if (i == 0) return f.grid.nodes[0];
  // cum[i] is the mass up to the outer edge of node i's cell, half a step above r_i.
  const double fr = (half - cum[i - 1]) / (cum[i] - cum[i - 1]);
  return f.grid.nodes[i - 1] * std::exp((fr + 0.5) * f.grid.log_step);
}

TruncationDiag truncation_diag(const BoundaryProfile& f, double p) {
  const auto mu = boundary_node_measure(f.grid, f.n);
  double tot = 0.0, in = 0.0, out = 0.0;
  const double lo = 10.0 * f.grid.front(), hi = 0.1 * f.grid.back();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m = mu[i] * std::pow(std::abs(f.values[i]), p);
    tot += m;
    if (f.grid.nodes[i] <= lo) in += m;
    if (f.grid.nodes[i] >= hi) out += m;
  }
  if (!(tot > 0.0)) return {};
  return {in / tot, out / tot};
}

TruncationDiag truncation_diag(const HalfSpaceProfile& g, double q) {
  const auto om = interior_node_measure(g.rho_grid, g.t_grid, g.n);
  const std::size_t nt = g.t_grid.size();
  const double rho_hi = 0.1 * g.rho_grid.back(), t_hi = 0.1 * g.t_grid.back(), t_lo = 10.0 * g.t_grid.front();
  double tot = 0.0, in = 0.0, out = 0.0;
  for (std::size_t j = 0; j < g.rho_grid.size(); ++j) {
    for (std::size_t k = 0; k < nt; ++k) {
      const double m = om[j * nt + k] * std::pow(std::abs(g.values[j * nt + k]), q);
      tot += m;
      if (g.t_grid.nodes[k] <= t_lo) in += m;
      if (g.rho_grid.nodes[j] >= rho_hi || g.t_grid.nodes[k] >= t_hi) out += m;
    }
  }
  if (!(tot > 0.0)) return {};
  return {in / tot, out / tot};
}

BoundaryProfile make_boundary_profile(const RadialGrid& grid, int n, const std::function<double(double)>& fn) {
  BoundaryProfile f;
  f.grid = grid;
  f.n = n;
  f.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = fn(grid.nodes[i]);
  return f;
}

}  // namespace swpk
