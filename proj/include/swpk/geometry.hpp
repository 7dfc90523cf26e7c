#pragma once

#include <cmath>
#include <numbers>

namespace swpk {

// Surface area of the unit sphere S^{dim-1} in R^dim. dim = 1 gives 2.
inline double unit_sphere_area(int dim) {
  const double h = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

inline double unit_ball_volume(int dim) {
  const double h = 0.5 * dim;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

}  // namespace swpk
