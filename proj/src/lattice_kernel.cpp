#include "swpk/lattice_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "angular.hpp"
#include "swpk/error.hpp"
#include "swpk/quadrature.hpp"

namespace swpk {

namespace {

class HatIntegrator {
 public:
  HatIntegrator(double h, int n, double gamma, double alpha, double tol)
      : ev_(n, gamma), h_(h), c_(n - 1.0 - alpha), tol_(tol) {
    for (int side = 0; side < 2; ++side) {
      const double v0 = side == 0 ? -h : 0.0;
      const double mid = v0 + 0.5 * h;
      for (int q = 0; q < 3; ++q) {
        for (int sgn = 0; sgn < 2; ++sgn) {
          const double v = mid + (sgn == 0 ? -1.0 : 1.0) * 0.5 * h * detail::kXgl6[q];
          const int idx = 2 * q + sgn;
          gl_[side][idx].r = std::exp(v);
          gl_[side][idx].w = 0.5 * h * detail::kWgl6[q] * hat(v) * std::exp(c_ * v);
        }
      }
    }
  }

  HatWeights operator()(std::int64_t a, std::int64_t b) const {
    HatWeights out;
    const double lrho = static_cast<double>(a) * h_;
    const double rho = std::exp(lrho);
    const double t = std::exp(static_cast<double>(b) * h_);
    for (int side = 0; side < 2; ++side) {
      const double v0 = side == 0 ? -h_ : 0.0, v1 = v0 + h_;
      const double lo = std::exp(v0), hi = std::exp(v1);
      const double dr = rho < lo ? lo - rho : (rho > hi ? rho - hi : 0.0);
      const double dist = std::hypot(dr, t);
      double val = 0.0;
      if (dist >= 2.0 * (hi - lo)) {
        for (const auto& node : gl_[side]) {
          double err = 0.0;
          bool failed = false;
          val += node.w * ev_.value(node.r, rho, t, 0.1 * tol_, &err, &failed);
          out.failed = out.failed || failed;
        }
      } else {
        out.adaptive = true;
        const QuadResult q = near(v0, v1, lrho, rho, t, dist, out.failed);
        val = q.value;
        out.error += q.error;
        out.failed = out.failed || !q.converged;
      }
      (side == 0 ? out.left : out.right) = val;
    }
    return out;
  }

 private:
  struct Node {
    double r = 0.0, w = 0.0;
  };

  double hat(double v) const { return 1.0 - std::abs(v) / h_; }

  // The (rho, t) point sits within a couple of cell widths of the r interval:
  // integrate in v with panels graded towards the closest point.
  QuadResult near(double v0, double v1, double lrho, double rho, double t, double dist, bool& failed) const {
    auto f = [&](double v) {
      const double r = std::exp(v);
      double err = 0.0;
      bool fl = false;
      const double a = ev_.value(r, rho, t, 0.1 * tol_, &err, &fl, rho * std::expm1(v - lrho));
      failed = failed || fl;
      return hat(v) * std::exp(c_ * v) * a;
    };
    const double vc = std::clamp(lrho, v0, v1);
    const double w = std::max(dist / rho, 1e-300);
    std::array<double, 160> br{};
    std::size_t nb = 0;
    br[nb++] = v0;
    std::array<double, 70> left{}, right{};
    std::size_t nl = 0, nr = 0;
    for (double d = w; vc - d > v0 && nl < left.size(); d *= 2.0) left[nl++] = vc - d;
    for (std::size_t i = nl; i-- > 0;) br[nb++] = left[i];
    if (vc > v0 && vc < v1) br[nb++] = vc;
    for (double d = w; vc + d < v1 && nr < right.size(); d *= 2.0) right[nr++] = vc + d;
    for (std::size_t i = 0; i < nr; ++i) br[nb++] = right[i];
    br[nb++] = v1;
    return integrate_adaptive<decltype(f)&, 1024>(f, std::span<const double>(br.data(), nb), tol_);
  }

  detail::AngularEvaluator ev_;
  double h_;
  double c_;
  double tol_;
  std::array<std::array<Node, 6>, 2> gl_{};
};

}  // namespace

HatWeights lattice_hat_weights(std::int64_t a, std::int64_t b, double log_step, int n, double gamma,
                               double alpha, double tol) {
  return HatIntegrator(log_step, n, gamma, alpha, tol)(a, b);
}

LatticeKernel build_lattice_kernel(const LatticeLayout& L, int n, double gamma, double alpha, double tol,
                                   int workers) {
  if (!(L.log_step > 0.0) || L.r_count < 2 || L.rho_count < 1 || L.t_count < 1)
    throw Error(Errc::BadGrid, "lattice layout is empty");
  LatticeKernel K;
  K.layout = L;
  K.n = n;
  K.gamma = gamma;
  K.alpha = alpha;
  const std::int64_t Nr = L.r_count, Nj = L.rho_count, Nk = L.t_count;
  const std::int64_t J0 = L.rho_offset, T0 = L.t_offset;
  K.a_min = J0 - (Nr - 1);
  K.a_count = Nj + Nr - 1;
  K.m_min = T0 - J0 - (Nj - 1);
  K.m_count = Nj + Nk - 1;
  K.table.assign(static_cast<std::size_t>(K.a_count * K.m_count), 0.0);
  K.first_outer.assign(static_cast<std::size_t>(Nj * Nk), 0.0);
  K.last_outer.assign(static_cast<std::size_t>(Nj * Nk), 0.0);

  const HatIntegrator integ(L.log_step, n, gamma, alpha, tol);
  const int nw = std::max(1, workers);
  struct Stats {
    std::size_t entries = 0, adaptive = 0, failed = 0;
    double max_rel = 0.0;
  };
  std::vector<Stats> stats(nw);

  auto work = [&](int w) {
    Stats& st = stats[w];
    for (std::int64_t mi = w; mi < K.m_count; mi += nw) {
      const std::int64_t m = K.m_min + mi;
      // rho index j pairs with t index k = j + J0 + m - T0.
      const std::int64_t jlo = std::max<std::int64_t>(0, T0 - J0 - m);
      const std::int64_t jhi = std::min<std::int64_t>(Nj - 1, Nk - 1 + T0 - J0 - m);
      if (jlo > jhi) continue;
      const std::int64_t alo = J0 + jlo - (Nr - 1), ahi = J0 + jhi;
      double* row = K.table.data() + mi * K.a_count;
      for (std::int64_t a = alo; a <= ahi; ++a) {
        const HatWeights hw = integ(a, a + m);
        const double full = hw.left + hw.right;
        row[a - K.a_min] = full;
        ++st.entries;
        if (hw.adaptive) ++st.adaptive;
        if (hw.failed) ++st.failed;
        if (full > 0.0) st.max_rel = std::max(st.max_rel, hw.error / full);
        const std::int64_t j0 = a - J0, k0 = a + m - T0;
        if (j0 >= 0 && j0 < Nj && k0 >= 0 && k0 < Nk) K.first_outer[j0 * Nk + k0] = hw.left;
        const std::int64_t j1 = a - J0 + Nr - 1, k1 = a + m - T0 + Nr - 1;
        if (j1 >= 0 && j1 < Nj && k1 >= 0 && k1 < Nk) K.last_outer[j1 * Nk + k1] = hw.right;
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
  for (const auto& st : stats) {
    K.entries += st.entries;
    K.adaptive_entries += st.adaptive;
    K.failed_entries += st.failed;
    K.max_rel_error = std::max(K.max_rel_error, st.max_rel);
  }
  return K;
}

}  // namespace swpk
