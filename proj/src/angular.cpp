#include "angular.hpp"

#include <array>
#include <numbers>

#include "swpk/geometry.hpp"

namespace swpk::detail {

AngularEvaluator::AngularEvaluator(int n, double gamma)
    : n_(n),
      s_(0.5 * (n + 2.0 - gamma)),
      sphere_n2_(unit_sphere_area(n - 1)),
      sphere_n3_(unit_sphere_area(n - 2)),
      negpow_(0.5 * (n + 2.0 - gamma)) {
  const double a = 0.5 * s_, b = 0.5 * (s_ + 1.0), c = 0.5 * (n - 1.0);
  ratio_.resize(4096);
  for (std::size_t j = 0; j < ratio_.size(); ++j) {
    const double jd = static_cast<double>(j);
    ratio_[j] = (a + jd) * (b + jd) / ((jd + 1.0) * (c + jd));
  }
}

double AngularEvaluator::series(double r, double rho, double t) const {
  const double c = r * r + rho * rho + t * t;
  const double x = 2.0 * r * rho / c;
  const double z = x * x;
  double term = 1.0, sum = 1.0;
  const double tail = z / (1.0 - z);
  for (std::size_t j = 0; j < ratio_.size(); ++j) {
    term *= ratio_[j] * z;
    sum += term;
    if (term * tail < 1e-17 * sum) break;
  }
  return sphere_n2_ * negpow_(c) * sum;
}

QuadResult AngularEvaluator::quadrature(double r, double rho, double t, double tol,
                                        double r_minus_rho) const {
  const double diff = std::isnan(r_minus_rho) ? r - rho : r_minus_rho;
  const double e0 = diff * diff + t * t;
  const double d4 = 4.0 * r * rho;
  const int wpow = n_ - 3;
  auto f = [&](double th) {
    const double h = std::sin(0.5 * th);
    double v = negpow_(e0 + d4 * h * h);
    if (wpow > 0) {
      const double s = std::sin(th);
      for (int i = 0; i < wpow; ++i) v *= s;
    }
    return v;
  };
  std::array<double, 64> breaks{};
  std::size_t nb = 0;
  breaks[nb++] = 0.0;
  if (r * rho > 0.0) {
    // Peak width of the integrand at theta = 0.
    const double w = std::sqrt(e0 / (r * rho));
    if (w < 0.25 * std::numbers::pi) {
      for (double th = w; th < std::numbers::pi && nb < breaks.size() - 1; th *= 2.0) breaks[nb++] = th;
    }
  }
  breaks[nb++] = std::numbers::pi;
  QuadResult q = integrate_adaptive(f, std::span<const double>(breaks.data(), nb), tol);
  q.value *= sphere_n3_;
  q.error *= sphere_n3_;
  return q;
}

double AngularEvaluator::value(double r, double rho, double t, double tol, double* err, bool* failed,
                               double r_minus_rho) const {
  const double c = r * r + rho * rho + t * t;
  const double x = 2.0 * r * rho / c;
  if (x * x <= kSeriesLimit) {
    if (err) *err = 0.0;
    if (failed) *failed = false;
    return series(r, rho, t);
  }
  const QuadResult q = quadrature(r, rho, t, tol, r_minus_rho);
  if (err) *err = q.error;
  if (failed) *failed = !(q.error <= tol * std::abs(q.value));
  return q.value;
}

}  // namespace swpk::detail
