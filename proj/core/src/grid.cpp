#include "ndphoton/grid.hpp"

#include <cmath>
#include <string>

#include "ndphoton/error.hpp"

namespace ndphoton {

const char* to_string(Domain d) {
  return d == Domain::Position ? "position" : "momentum";
}

GridSpec::GridSpec(std::size_t n, double dx)
    : n_(n), dx_(dx), dk_(2.0 * std::numbers::pi / (static_cast<double>(n) * dx)) {}

GridSpec GridSpec::make(std::size_t n, double dx) {
  if (n < 16 || (n & (n - 1)) != 0) {
    throw DomainError("grid size n = " + std::to_string(n) +
                      " must be a power of two >= 16");
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw DomainError("grid pitch dx must be positive and finite");
  }
  return GridSpec(n, dx);
}

}  // namespace ndphoton
