#pragma once

#include <cstddef>
#include <vector>

#include "ndphoton/grid.hpp"

namespace ndphoton {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n);

struct WeightedPoint {
  Vec2 k;
  double weight = 0.0;
};

/// Polar product rule over the disk |k - center| <= radius: Gauss-Legendre
/// in r (with the r Jacobian) times n_azimuthal uniform angles 2 pi m / N.
/// Weights sum to pi radius^2. A zero radius gives the single point
/// {center, 1}.
std::vector<WeightedPoint> disk_quadrature(Vec2 center, double radius, std::size_t n_radial,
                                           std::size_t n_azimuthal);

}  // namespace ndphoton
