#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ndphoton/grid.hpp"

namespace ndphoton {

using cplx = std::complex<double>;

/// Complex scalar field sampled on a GridSpec, row-major (row = y index,
/// column = x index), tagged with the domain it lives in.
class ComplexField {
public:
  /// Zero field.
  ComplexField(GridSpec grid, Domain domain);
  /// Takes ownership of n*n samples; throws DomainError on a size mismatch
  /// or a non-finite sample.
  ComplexField(GridSpec grid, Domain domain, std::vector<cplx> values);

  const GridSpec& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::size_t n() const { return grid_.n(); }
  double pitch() const { return grid_.pitch(domain_); }
  double coord(std::size_t j) const { return grid_.coord(domain_, j); }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  cplx& at(std::size_t row, std::size_t col) { return values_[row * grid_.n() + col]; }
  const cplx& at(std::size_t row, std::size_t col) const {
    return values_[row * grid_.n() + col];
  }

  /// Same samples, new grid/domain labels (used by relabeling optics).
  ComplexField relabeled(GridSpec grid, Domain domain) const&;
  ComplexField relabeled(GridSpec grid, Domain domain) &&;

private:
  GridSpec grid_;
  Domain domain_;
  std::vector<cplx> values_;
};

/// Sum |v|^2 * pitch^2 in the field's own domain.
double energy(const ComplexField& field);

/// Scales the field to unit energy. Throws DomainError for a zero field.
void normalize_energy(ComplexField& field);

/// Unitary centred Fourier pair. Momentum samples approximate the continuous
/// transform (1/2pi) Int u(x) exp(-i k.x) d^2x, so energy() is identical in
/// both domains. Throws DomainTagError when the input is in the wrong domain.
ComplexField to_momentum(const ComplexField& field);
ComplexField to_position(const ComplexField& field);

/// |v|^2 per sample.
std::vector<double> intensity(const ComplexField& field);

/// Phase-aligned relative L2 distance min_phi ||a - e^{i phi} b|| / ||a||.
double phase_aligned_l2(const ComplexField& a, const ComplexField& b);

/// Plain relative L2 distance ||a - b|| / ||a||.
double relative_l2(std::span<const cplx> a, std::span<const cplx> b);
double relative_l2(std::span<const double> a, std::span<const double> b);

/// Real-valued 2-D map (intensities, counts). Not necessarily square or
/// power-of-two: windows cut out of a grid are RealMaps too.
struct RealMap {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double pitch = 1.0;
  double x0 = 0.0;  ///< coordinate of column 0
  double y0 = 0.0;  ///< coordinate of row 0
  Domain domain = Domain::Position;
  std::vector<double> values;
  /// Set when the map covers a full centred grid (not a crop).
  std::optional<GridSpec> grid;

  static RealMap on_grid(const GridSpec& grid, Domain domain, std::vector<double> values);

  double x(std::size_t col) const { return x0 + static_cast<double>(col) * pitch; }
  double y(std::size_t row) const { return y0 + static_cast<double>(row) * pitch; }
  double at(std::size_t row, std::size_t col) const { return values[row * nx + col]; }
  double max() const;

  /// Square window of samples within half_width of center (clipped to map).
  RealMap crop(Vec2 center, double half_width) const;

  /// Values divided by their maximum (no-op for an all-zero map).
  RealMap peak_normalized() const;
};

}  // namespace ndphoton
