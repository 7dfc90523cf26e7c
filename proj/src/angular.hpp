#pragma once

// Shared evaluator for the angular factor. Precomputes the series ratios and a
// fast path for base^{-s} when 2s is an integer.

#include <cmath>
#include <limits>
#include <vector>

#include "swpk/quadrature.hpp"

namespace swpk::detail {

class NegPow {
 public:
  explicit NegPow(double s) : s_(s) {
    const double twice = 2.0 * s;
    const double k = std::round(twice);
    if (std::abs(twice - k) < 1e-14 && k >= 1.0 && k <= 16.0) half_int_ = static_cast<int>(k);
  }

  // base^{-s} for base > 0.
  double operator()(double base) const {
    if (half_int_ == 0) return std::pow(base, -s_);
    double v = 1.0;
    for (int i = 0; i < half_int_ / 2; ++i) v *= base;
    if (half_int_ % 2 == 1) v *= std::sqrt(base);
    return 1.0 / v;
  }

 private:
  double s_;
  int half_int_ = 0;
};

class AngularEvaluator {
 public:
  // Series is used below this z, where it needs at most a few hundred terms.
  static constexpr double kSeriesLimit = 0.8;

  AngularEvaluator(int n, double gamma);

  double s() const { return s_; }
  int n() const { return n_; }

  // Sum of the hypergeometric series; caller guarantees z < 1.
  double series(double r, double rho, double t) const;
  // r_minus_rho may be supplied when it is known more accurately than r - rho.
  QuadResult quadrature(double r, double rho, double t, double tol,
                        double r_minus_rho = std::numeric_limits<double>::quiet_NaN()) const;

  // Series when z <= kSeriesLimit, quadrature otherwise. err receives the
  // quadrature error estimate (0 for the series).
  double value(double r, double rho, double t, double tol, double* err = nullptr, bool* failed = nullptr,
               double r_minus_rho = std::numeric_limits<double>::quiet_NaN()) const;

 private:
  int n_;
  double s_;
  double sphere_n2_;  // |S^{n-2}|
  double sphere_n3_;  // |S^{n-3}|, equal to 2 for n = 3
  NegPow negpow_;
  std::vector<double> ratio_;  // coefficient ratios of the 2F1 series
};

}  // namespace swpk::detail
