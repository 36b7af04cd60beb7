#pragma once

#include <numbers>

#include "ndphoton/field.hpp"

namespace ndphoton {

/// Bessel-Gauss beam: Gaussian envelope waist w0 (um), cone transverse
/// wavenumber kt (rad/um), vacuum wavelength (um).
struct BGParams {
  double w0 = 1850.0;
  double kt = 0.046;
  double wavelength = 0.406;

  double k() const { return 2.0 * std::numbers::pi / wavelength; }
  double z_r() const { return k() * w0 * w0 / 2.0; }
  /// Throws DomainError unless w0 > 0, wavelength > 0 and 0 <= kt < k.
  void validate() const;
};

/// Conical lens. Stores the full apex angle; the base angle is
/// alpha = (pi - apex) / 2 and the imposed transverse wavenumber is
/// k (n_r - 1) alpha in the thin-prism approximation.
struct AxiconSpec {
  double apex_angle = std::numbers::pi;
  double refractive_index = 1.46;

  static AxiconSpec from_base_angle(double alpha, double refractive_index);
  double base_angle() const { return (std::numbers::pi - apex_angle) / 2.0; }
  double kt(double wavelength) const;
  /// Throws DomainError unless 0 < apex <= pi and n_r > 1.
  void validate() const;
};

/// Angular spectrum of the beam at its waist, unit energy, momentum domain.
/// Requires k_max >= kt + 8/w0 and dk <= 1/w0.
ComplexField bg_spectrum(const BGParams& p, const GridSpec& grid);

/// Closed-form paraxial amplitude at distance z from the waist (z may be
/// negative), unit energy, position domain. The e^{ikz} carrier is omitted.
/// Requires n dx >= 6 w0 |mu(z)| and, for kt > 0, dx <= (2 pi / kt) / 8.
ComplexField bg_field(const BGParams& p, double z, const GridSpec& grid);

/// Fundamental Gaussian beam with waist w0 at z = 0, unit energy. Requires
/// n dx >= 6 w(z) and dx <= w0 / 2.
ComplexField gaussian_field(double w0, double wavelength, double z, const GridSpec& grid);

/// Multiplies by exp(-i k (n_r - 1) alpha |rho|).
ComplexField apply_axicon(const ComplexField& field, const AxiconSpec& ax, double wavelength);

}  // namespace ndphoton
