#pragma once

#include <cstddef>
#include <numbers>

namespace ndphoton {

/// Lengths are in micrometres, transverse wavenumbers in rad/um.
enum class Domain { Position, Momentum };

const char* to_string(Domain d);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

/// Square, uniformly sampled transverse grid. Sample j sits at
/// x_j = (j - n/2) dx and k_j = (j - n/2) dk with dk = 2 pi / (n dx), so the
/// origin of both domains is at index n/2.
class GridSpec {
public:
  /// Throws DomainError unless n is a power of two >= 16 and dx > 0.
  static GridSpec make(std::size_t n, double dx);

  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double dx() const { return dx_; }
  double dk() const { return dk_; }
  /// Nyquist transverse wavenumber pi / dx.
  double k_max() const { return std::numbers::pi / dx_; }
  double extent() const { return static_cast<double>(n_) * dx_; }

  double x(std::size_t j) const { return offset(j) * dx_; }
  double k(std::size_t j) const { return offset(j) * dk_; }
  double pitch(Domain d) const { return d == Domain::Position ? dx_ : dk_; }
  double coord(Domain d, std::size_t j) const { return offset(j) * pitch(d); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
  GridSpec(std::size_t n, double dx);
  double offset(std::size_t j) const {
    return static_cast<double>(j) - static_cast<double>(n_ / 2);
  }

  std::size_t n_;
  double dx_;
  double dk_;
};

inline GridSpec make_grid(std::size_t n, double dx) { return GridSpec::make(n, dx); }

}  // namespace ndphoton
