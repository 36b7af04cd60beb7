#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ndphoton/analysis.hpp"
#include "ndphoton/cli/run_config.hpp"
#include "ndphoton/spdc.hpp"

namespace ndphoton::cli {

/// Crystal-plane pump built from the [pump] block. For the axicon chain the
/// returned grid is the magnified output grid.
struct PumpBuild {
  PumpState state;
  std::vector<std::string> warnings;
};
PumpBuild make_pump(const RunConfig& cfg);

/// kx at the maximum of |S_p(kx, 0)|^2 over kx >= 0, refined by a parabola
/// through the three samples around the largest one.
double annulus_peak_kx(const PumpState& pump);

HeraldSpec make_herald(const RunConfig& cfg, const PumpState& pump);
HeraldSpec make_singles_acceptance(const RunConfig& cfg, const PumpState& pump);
/// Signal fiber radius at FP1 in k units.
double fp1_signal_fiber_k(const RunConfig& cfg);
ScanSpec make_scan(const RunConfig& cfg);

/// Conditional momentum maps of the spdc-sim scenario: idler fiber only,
/// and idler plus FP1 signal fiber.
struct ConditionalMaps {
  HeraldSpec herald;
  RealMap idler_only;
  RealMap both_fibers;
  std::optional<AnnulusFit> idler_only_fit;
  std::optional<AnnulusFit> both_fibers_fit;
};
ConditionalMaps conditional_maps(const RunConfig& cfg, const PumpState& pump);

SweepResult run_z_sweep(const RunConfig& cfg, const PumpState& pump);

/// Each writes a complete run directory (maps, report.txt, manifest.json).
void run_pump_sim(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log);
void run_spdc_sim(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log);
void run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log);

/// Re-analyzes a run directory. Verifies manifest checksums (IoError on a
/// mismatch), warns when there is no manifest, and returns the report.
std::string analyze_run(const std::filesystem::path& dir, std::vector<std::string>& warnings);

}  // namespace ndphoton::cli
