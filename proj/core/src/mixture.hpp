#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndphoton/spdc.hpp"

namespace ndphoton::detail {

/// Intensity of the centre herald node at the observation plane, with the
/// data needed to shift it to any other node.
struct CovariantBase {
  ComplexField spectrum;  ///< centred transform of the base intensity
  double shift_per_k = 0.0;
  Vec2 k_center{};
  Vec2 chief_ray{};
  std::vector<std::string> warnings;
};

/// The signal train followed by free space z.
OpticalTrain extended_train(const OpticalTrain& train, double z);

/// |U[conditional_spectrum(pump, k)]|^2 at the end of `full`.
RealMap node_intensity(const PumpState& pump, Vec2 k, const OpticalTrain& full,
                       std::vector<std::string>* warnings);

/// Requires full to have a ray matrix with an invertible-free B (any value).
CovariantBase covariant_base(const PumpState& pump, Vec2 k_center, const OpticalTrain& full);

/// Base spectrum multiplied by the herald kernel sum_j w_j exp(-i q.s_j)
/// (or its uniform-disk limit for ExactDisk sampling).
ComplexField apply_herald_kernel(const CovariantBase& base, const HeraldSpec& herald);

/// Packs a mixture spectrum into a result (map, optional peak normalisation).
MixtureResult finish_mixture(IntensitySpectrum spec, MixtureRoute route,
                             std::optional<double> shift_per_k, Vec2 chief,
                             std::vector<std::string> warnings, bool normalize);

MixtureResult covariant_mixture(const CovariantBase& base, const HeraldSpec& herald,
                                bool normalize);

/// Relative L2 change of the area-normalised mixture when the herald radius
/// is multiplied by factor, evaluated on the spectra (Parseval).
double coverage_change(const CovariantBase& base, const HeraldSpec& herald, double factor);

/// Convolves a full-grid map with a uniform disk (mean over the disk) by
/// multiplying its transform with jinc(|q| radius). Works for either domain.
RealMap disk_average(const RealMap& map, double radius);

/// Real part, negatives from round-off clamped to zero.
std::vector<double> real_nonnegative(const ComplexField& field);

}  // namespace ndphoton::detail
