#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndphoton/field.hpp"
#include "ndphoton/optics.hpp"
#include "ndphoton/quadrature.hpp"

namespace ndphoton {

/// Pump angular amplitude at the crystal plane plus the fixed
/// (monochromatic) pump, signal and idler wavelengths.
class PumpState {
public:
  /// Signal and idler both at twice the pump wavelength.
  static PumpState degenerate(ComplexField spectrum, double pump_wavelength);
  /// Throws DomainError unless 1/ls + 1/li = 1/lp within 1e-9 relative.
  static PumpState make(ComplexField spectrum, double pump_wavelength, double signal_wavelength,
                        double idler_wavelength);

  const ComplexField& spectrum() const { return spectrum_; }
  /// Position-domain amplitude at the crystal plane.
  const ComplexField& near_field() const { return near_field_; }
  double pump_wavelength() const { return lp_; }
  double signal_wavelength() const { return ls_; }
  double idler_wavelength() const { return li_; }
  double k_signal() const;
  double k_idler() const;

private:
  PumpState(ComplexField spectrum, double lp, double ls, double li);

  ComplexField spectrum_;
  ComplexField near_field_;
  double lp_;
  double ls_;
  double li_;
};

enum class HeraldSampling {
  Polar,      ///< Gauss-Legendre x uniform-angle product rule
  ExactDisk,  ///< analytic uniform-disk average where the route allows it
};

const char* to_string(HeraldSampling s);

/// Idler detector: centre transverse wavevector and acceptance radius, both
/// in rad/um.
struct HeraldSpec {
  Vec2 k_center{};
  double aperture_radius_k = 0.0;
  std::size_t n_radial = 6;
  std::size_t n_azimuthal = 16;
  HeraldSampling sampling = HeraldSampling::Polar;

  /// Throws DomainError on a negative radius or zero node counts.
  void validate() const;
  /// Polar nodes (a single node with weight 1 for a point herald).
  std::vector<WeightedPoint> nodes() const;
  /// Sum of node weights: pi a^2, or 1 for a point herald.
  double total_weight() const;
};

/// Fiber tip of radius r in the back focal plane of a lens of focal length f
/// accepts transverse wavenumbers up to r k / f.
double fiber_radius_to_k(double fiber_radius, double wavelength, double focal_length);

/// Signal angular amplitude for a sharp idler wavevector k_i: the pump
/// spectrum evaluated at k_s + k_i, zero-filled where the shift leaves the
/// grid, unit energy. Non-integer shifts (in units of dk) are applied as a
/// band-limited phase ramp in the position domain. Throws
/// ShiftOverflowError if more than 1e-6 of the energy would leave the grid.
ComplexField conditional_spectrum(const PumpState& pump, Vec2 k_i);

/// Observation-plane intensity stored through its centred spectrum, so that
/// it can be sampled off-grid exactly (trigonometric interpolation).
class IntensitySpectrum {
public:
  explicit IntensitySpectrum(ComplexField spectrum);
  /// From a position-domain intensity map on a full grid.
  static IntensitySpectrum from_map(const RealMap& map);

  const ComplexField& spectrum() const { return spectrum_; }
  const GridSpec& grid() const { return spectrum_.grid(); }

  RealMap map() const;
  /// I(x, y) along a line parallel to the y axis at x = x0.
  std::vector<double> line_y(double x0, const std::vector<double>& y) const;
  /// Convolution with a uniform disk of the given radius (mean over the disk).
  IntensitySpectrum disk_averaged(double radius) const;
  IntensitySpectrum scaled(double s) const;

private:
  ComplexField spectrum_;
};

enum class MixtureRoute {
  Auto,       ///< Covariant when the train has a ray matrix, else Literal
  Literal,    ///< propagate every herald node through the train
  Covariant,  ///< propagate the centre node, shift its intensity per node
};

const char* to_string(MixtureRoute r);

struct MixtureOptions {
  MixtureRoute route = MixtureRoute::Auto;
  bool normalize_peak = false;
};

struct MixtureResult {
  IntensitySpectrum intensity;
  RealMap map;
  MixtureRoute route = MixtureRoute::Literal;
  /// Image-space shift per unit idler wavevector: s = -(B / k_s) (k - k_c).
  std::optional<double> shift_per_k;
  /// Where the centre herald node lands at the observation plane.
  Vec2 chief_ray{};
  std::vector<std::string> warnings;
};

/// Incoherent mixture sum_j w_j |U[conditional_spectrum(pump, k_j)]|^2 where
/// U is the signal train followed by free space z. The train wavelength
/// must equal the pump's signal wavelength. ExactDisk sampling requires the
/// covariant route; Literal falls back to the polar nodes.
MixtureResult heralded_intensity(const PumpState& pump, const HeraldSpec& herald,
                                 const OpticalTrain& train, double z,
                                 const MixtureOptions& options = {});

/// Signal singles: the same mixture over a large idler acceptance. Adds a
/// warning when enlarging the acceptance radius by 25% changes the
/// area-normalised map by more than 1% relative L2.
MixtureResult unconditioned_intensity(const PumpState& pump, const HeraldSpec& acceptance,
                                      const OpticalTrain& train, double z,
                                      const MixtureOptions& options = {});

/// Relative L2 change of the area-normalised singles map when the acceptance
/// radius grows by `factor`.
double acceptance_coverage_change(const PumpState& pump, const HeraldSpec& acceptance,
                                  const OpticalTrain& train, double z, double factor = 1.25);

/// Largest shift radius (multiple of dk, minimum over +-x and +-y) for which
/// at least `threshold` of the translated pump spectrum stays on the grid.
double idler_acceptance_radius(const PumpState& pump, double threshold = 1e-4);

/// Default singles acceptance: ExactDisk of idler_acceptance_radius about 0.
HeraldSpec default_idler_acceptance(const PumpState& pump, double threshold = 1e-4);

/// Full-grid momentum-space coincidence map for a signal fiber of radius
/// signal_fiber_radius_k in k units (0 = point). Polar sampling sums exact
/// per-node translates; ExactDisk averages |A(k_center)|^2 over the disk.
RealMap conditional_momentum_map(const PumpState& pump, const HeraldSpec& herald,
                                 double signal_fiber_radius_k);

/// Uniform-disk average of a full-grid map (top-hat fiber integrator), by
/// multiplying its transform with jinc(|q| radius).
RealMap fiber_average(const RealMap& map, double radius);

struct Window {
  Vec2 center{};
  double half_width = 0.0;
};

/// conditional_momentum_map cropped to the window. Throws DomainError if the
/// window is not inside the grid.
RealMap conditional_spectrum_scan(const PumpState& pump, const HeraldSpec& herald,
                                  double signal_fiber_radius_k, const Window& window);

/// Fiber scan along y at each plane.
struct ScanSpec {
  double fiber_radius = 25.0;  ///< um; 0 samples a point
  double step = 0.0;           ///< um; 0 selects a quarter of the plane pitch
  double half_width = 0.0;     ///< um; 0 spans the whole grid
};

struct PlaneResult {
  double z = 0.0;
  std::vector<double> y;
  std::vector<double> coincidence;
  std::vector<double> singles;
  double r_c = 0.0;
  double r_s = 0.0;
  double fwhm_c = 0.0;  ///< NaN when the width could not be measured
  double fwhm_s = 0.0;
};

struct SweepOptions {
  MixtureRoute route = MixtureRoute::Auto;
  /// When > 0, every output is scaled so max coincidence at the first plane
  /// equals this value.
  double count_rate = 0.0;
};

struct SweepResult {
  std::vector<PlaneResult> planes;
  std::vector<std::string> warnings;
  double scale = 1.0;
};

/// Coincidence and singles profiles at each z (strictly increasing).
/// `acceptance` defaults to default_idler_acceptance(pump).
SweepResult z_sweep(const PumpState& pump, const HeraldSpec& herald, const OpticalTrain& train,
                    const std::vector<double>& z_list, const ScanSpec& scan,
                    const std::optional<HeraldSpec>& acceptance = std::nullopt,
                    const SweepOptions& options = {});

}  // namespace ndphoton
