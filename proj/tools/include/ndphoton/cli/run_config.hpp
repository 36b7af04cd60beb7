#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndphoton/cli/config.hpp"
#include "ndphoton/optics.hpp"
#include "ndphoton/spdc.hpp"

namespace ndphoton::cli {

enum class Scenario { PumpSim, SpdcSim, Sweep };

const char* to_string(Scenario s);

struct GridConfig {
  std::size_t n = 1024;
  double dx = 12.0;
};

enum class PumpMode { BesselGauss, AxiconChain };

struct PumpConfig {
  PumpMode mode = PumpMode::BesselGauss;
  double wavelength = 0.406;
  double w0 = 1850.0;
  double kt = 0.046;
  // axicon-chain mode: Gaussian of waist input_waist through an axicon, then
  // an ideal telescope of the given magnification
  double input_waist = 7500.0;
  std::optional<double> axicon_apex_angle;
  std::optional<double> axicon_base_angle;
  double axicon_index = 1.46;
  double magnification = 5.0;
  std::optional<double> signal_wavelength;
  std::optional<double> idler_wavelength;
  std::vector<double> sheet_z;
  double sheet_half_width = 600.0;

  AxiconSpec axicon() const;
};

struct HeraldConfig {
  std::optional<double> kx;  ///< nullopt: annulus maximum of the pump along +kx
  double ky = 0.0;
  double fiber_diameter = 200.0;
  double focal_length = 1e5;
  std::size_t n_radial = 6;
  std::size_t n_azimuthal = 16;
  HeraldSampling sampling = HeraldSampling::Polar;
};

struct ScanConfig {
  double fp1_fiber_diameter = 200.0;
  double fp2_fiber_diameter = 50.0;
  double window_half_width = 0.08;
  std::vector<double> z;
  double step = 0.0;        ///< 0: automatic
  double half_width = 0.0;  ///< 0: automatic
  double count_rate = 0.0;
  double singles_threshold = 1e-4;
  std::size_t singles_n_radial = 24;
  std::size_t singles_n_azimuthal = 48;
  MixtureRoute route = MixtureRoute::Auto;
  double fwhm_tolerance = 0.2;
};

struct OutputConfig {
  std::string dir = "ndphoton_run";
  bool csv = true;
  bool pgm = true;
  bool cfld = true;
};

struct RunConfig {
  GridConfig grid;
  PumpConfig pump;
  std::optional<std::vector<Stage>> train;
  HeraldConfig herald;
  ScanConfig scan;
  OutputConfig output;

  double signal_wavelength() const;
  double idler_wavelength() const;
  OpticalTrain signal_train() const;  ///< throws ConfigError without [train]
};

/// Checks that the blocks the scenario needs are present, rejects unknown
/// keys and converts units. Missing keys take the built-in defaults.
RunConfig resolve(const RawConfig& raw, Scenario scenario);

/// Canonical text with every key spelled out in um, rad/um and rad.
std::string to_text(const RunConfig& cfg);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
std::string preset_text(const std::string& name);

}  // namespace ndphoton::cli
