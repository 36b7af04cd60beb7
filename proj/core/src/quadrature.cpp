#include "ndphoton/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ndphoton/error.hpp"

namespace ndphoton {

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  // P_n(x) and its derivative by the three-term recurrence
  auto legendre = [&](double x, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double dk = static_cast<double>(k);
      const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
      p0 = p1;
      p1 = p2;
    }
    dp = dn * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double step = legendre(x, dp) / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<WeightedPoint> disk_quadrature(Vec2 center, double radius, std::size_t n_radial,
                                           std::size_t n_azimuthal) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("disk quadrature radius must be finite and >= 0");
  }
  if (n_radial == 0 || n_azimuthal == 0) {
    throw DomainError("disk quadrature needs at least one radial and one azimuthal node");
  }
  if (radius == 0.0) return {{center, 1.0}};
  const QuadratureRule gl = gauss_legendre(n_radial);
  std::vector<WeightedPoint> pts;
  pts.reserve(n_radial * n_azimuthal);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_azimuthal);
  for (std::size_t i = 0; i < n_radial; ++i) {
    const double r = 0.5 * radius * (1.0 + gl.nodes[i]);
    const double wr = 0.5 * radius * gl.weights[i] * r;
    for (std::size_t m = 0; m < n_azimuthal; ++m) {
      const double phi = dphi * static_cast<double>(m);
      pts.push_back({{center.x + r * std::cos(phi), center.y + r * std::sin(phi)}, wr * dphi});
    }
  }
  return pts;
}

}  // namespace ndphoton
