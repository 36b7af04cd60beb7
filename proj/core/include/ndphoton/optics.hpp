#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ndphoton/beams.hpp"
#include "ndphoton/field.hpp"

namespace ndphoton {

enum class PropagationModel { Paraxial, Exact };

const char* to_string(PropagationModel m);

struct FreeSpace {
  double z = 0.0;
  PropagationModel model = PropagationModel::Paraxial;
};

struct ThinLens {
  double f = std::numeric_limits<double>::infinity();
  /// Clear radius; infinity means unbounded.
  double radius = std::numeric_limits<double>::infinity();
};

struct CircularAperture {
  double radius = 0.0;
};

/// Ideal imaging with transverse magnification m (negative inverts).
struct IdealMagnifier {
  double m = 1.0;
};

/// Lens at distance f from both the input and the output plane.
struct FourierSystem {
  double f = 0.0;
};

struct Axicon {
  AxiconSpec spec;
};

using Element =
    std::variant<FreeSpace, ThinLens, CircularAperture, IdealMagnifier, FourierSystem, Axicon>;

std::string describe(const Element& e);

/// One element of a train. A non-empty tap label records the field right
/// after this element.
struct Stage {
  Element element;
  std::string tap;
};

struct OpticalTrain {
  double wavelength = 0.0;
  std::vector<Stage> stages;

  /// Throws DomainError on an empty train, wavelength <= 0 or an invalid
  /// element parameter (f = 0, radius <= 0, m = 0, non-finite z).
  void validate() const;
};

struct PropagationResult {
  ComplexField field;
  /// More than 0.1% of the energy sits within 10% of k_max.
  bool aliasing_risk = false;
};

/// Angular-spectrum propagation by z (um, any sign). Paraxial uses
/// exp(i z (k - K^2/2k)); Exact uses exp(i z sqrt(k^2 - K^2)) and drops
/// samples with K >= k. Exact requires k_max < k.
PropagationResult propagate(const ComplexField& field, double z, double wavelength,
                            PropagationModel model = PropagationModel::Paraxial);

/// Fraction of momentum-domain energy with max(|kx|, |ky|) >= 0.9 k_max.
double edge_energy_fraction(const ComplexField& spectrum);

/// Thin lens phase exp(-i k rho^2 / 2f). Infinite f is the identity.
ComplexField apply_lens(const ComplexField& field, double f, double wavelength);

/// Zeroes samples with |rho| > radius.
ComplexField apply_aperture(const ComplexField& field, double radius);

/// Field in the back focal plane of an f-f system: the momentum samples of
/// the input relabeled to rho = f K / k on a grid of pitch |f| dk / k, scaled
/// by k / |f| so energy is preserved. The constant -i factor is dropped.
ComplexField fourier_plane_field(const ComplexField& field, double f, double wavelength);

/// Relabels coordinates rho -> m rho, scales amplitude by 1/|m|.
ComplexField magnify(const ComplexField& field, double m);

/// Applies one element at the given wavelength. Sets *aliasing when a
/// propagation step raises the aliasing flag.
ComplexField apply_element(const ComplexField& field, const Element& element, double wavelength,
                           bool* aliasing = nullptr);

struct TrainResult {
  ComplexField output;
  std::vector<std::pair<std::string, ComplexField>> taps;
  std::vector<std::string> warnings;
};

/// Runs the stages in order. A failing element rethrows its error with the
/// zero-based plane index prepended to the message.
TrainResult run_train(const ComplexField& field, const OpticalTrain& train);

/// Paraxial ray-transfer matrix (x_out, theta_out) = M (x_in, theta_in).
struct RayMatrix {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  RayMatrix then(const RayMatrix& next) const;  ///< next * this
};

/// ABCD matrix of a train, or nullopt if any element has no exact one
/// (apertures, finite lens radii, axicons, Exact free space).
std::optional<RayMatrix> ray_matrix(const OpticalTrain& train);
std::optional<RayMatrix> ray_matrix(const Element& element);

}  // namespace ndphoton
