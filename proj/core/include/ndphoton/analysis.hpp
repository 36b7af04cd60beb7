#pragma once

#include <optional>
#include <vector>

#include "ndphoton/field.hpp"

namespace ndphoton {

/// 1-D curve with strictly increasing coordinates (um or rad/um).
struct Profile {
  std::vector<double> coords;
  std::vector<double> values;
  Domain domain = Domain::Position;

  /// Throws DomainError on size mismatch, non-increasing coordinates or
  /// non-finite values.
  void validate() const;
};

struct RadialProfile : Profile {
  Vec2 center{};
  double bin_width = 0.0;
  /// Bins that held no sample and were filled by linear interpolation.
  std::vector<bool> interpolated;
};

/// Azimuthal mean in bins of width bin_width (default: the map pitch).
/// Bin b collects samples with floor(r / width + 1/2) = b and is reported
/// at radius b * width. Throws DomainError if the centre lies outside the
/// map or n_bins < 8.
RadialProfile radial_profile(const RealMap& map, Vec2 center, std::size_t n_bins,
                             double bin_width = 0.0);

/// Intensity-weighted centre of a map.
Vec2 centroid(const RealMap& map);

struct AnnulusFit {
  double kt_fit = 0.0;
  double delta_k = 0.0;  ///< full width at 1/e^2 of the radial intensity
  double w0_fit = 0.0;   ///< 4 / delta_k
  Vec2 center{};
  double residual = 0.0;  ///< RMS misfit to a Gaussian ring, relative
};

/// Ring radius and width of a momentum-domain map, measured on the radial
/// power profile r * <I>(r) (quarter-pitch bins) about the centroid, with a
/// parabolic peak refinement. Returns nullopt when the azimuthal mean peaks
/// at the centre or a 1/e^2 crossing is missing.
std::optional<AnnulusFit> annulus_fit(const RealMap& map);

/// Full width at half maximum about the global maximum, half-max crossings
/// located by linear interpolation. Throws DomainError when the peak sits on
/// the first/last sample or a crossing lies outside the profile.
double fwhm(const Profile& profile);

/// magnification^2 * w0 * k_signal / kt. Throws DomainError for kt <= 0.
double z_max_formula(double w0, double k_signal, double kt, double magnification = 1.0);

/// Largest z such that every width up to and including z stays within
/// (1 + tolerance) of the width at z = 0. Widths that are NaN count as out of
/// tolerance. Requires at least 3 planes, one of them at z = 0.
double nondiffracting_range(const std::vector<double>& z, const std::vector<double>& widths,
                            double tolerance = 0.2);

}  // namespace ndphoton
