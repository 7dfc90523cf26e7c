#pragma once

// Small fixed and adaptive Gauss rules. Header-only so that integrands inline.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

namespace swpk {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr std::array<double, 3> kXgl6 = {0.2386191860831969086305017, 0.6612093864662645136613996,
                                                0.9324695142031520278123016};
inline constexpr std::array<double, 3> kWgl6 = {0.4679139345726910473898703, 0.3607615730481386075698335,
                                                0.1713244923791703450402961};

}  // namespace detail

// Kronrod 15 point rule with the embedded 7 point Gauss estimate.
template <class F>
inline void gk15(F& f, double a, double b, double& value, double& error) {
  using namespace detail;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = f(c - dx);
    f2[j] = f(c + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  value = resk * h;
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = 2.220446049250313e-16;
  const double floor = 50.0 * eps * resabs * std::abs(h);
  error = std::max(err, floor);
}

template <class F>
inline double gauss_legendre6(F& f, double a, double b) {
  using namespace detail;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int j = 0; j < 3; ++j) s += kWgl6[j] * (f(c - h * kXgl6[j]) + f(c + h * kXgl6[j]));
  return s * h;
}

// Globally adaptive bisection: the panel with the largest error estimate is
// split until the summed error meets max(rel_tol*|I|, abs_tol). `breaks` are
// the initial panel boundaries in increasing order.
template <class F, std::size_t Cap = 512>
inline QuadResult integrate_adaptive(F&& f, std::span<const double> breaks, double rel_tol,
                                     double abs_tol = 0.0) {
  struct Panel {
    double a, b, v, e;
  };
  std::array<Panel, Cap> panels;
  std::size_t count = 0;
  QuadResult out;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size() && count < Cap; ++i) {
    Panel p{breaks[i], breaks[i + 1], 0.0, 0.0};
    if (!(p.b > p.a)) continue;
    gk15(f, p.a, p.b, p.v, p.e);
    out.evaluations += 15;
    total += p.v;
    total_err += p.e;
    panels[count++] = p;
  }
  while (total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
    if (count + 1 > Cap) {
      out.converged = false;
      break;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < count; ++i)
      if (panels[i].e > panels[worst].e) worst = i;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      out.converged = false;
      break;
    }
    Panel l{p.a, mid, 0.0, 0.0}, r{mid, p.b, 0.0, 0.0};
    gk15(f, l.a, l.b, l.v, l.e);
    gk15(f, r.a, r.b, r.v, r.e);
    out.evaluations += 30;
    panels[worst] = l;
    panels[count++] = r;
    // Re-sum rather than update incrementally so rounding does not accumulate.
    total = 0.0;
    total_err = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      total += panels[i].v;
      total_err += panels[i].e;
    }
  }
  out.value = total;
  out.error = total_err;
  return out;
}

}  // namespace swpk
