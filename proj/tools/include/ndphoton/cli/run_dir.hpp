#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndphoton/analysis.hpp"
#include "ndphoton/cli/run_config.hpp"
#include "ndphoton/field.hpp"

namespace ndphoton::cli {

/// Ordered "key = value" lines; numbers are printed round-trip exact.
class Report {
public:
  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, std::string>>& lines() const { return lines_; }
  std::string text() const;

private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string format_double(double v);

/// Lowercase hex SHA-256 of a byte string or a file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Square window about the map centroid that holds all but 1e-4 of the
/// map's total, clipped to the map. Used for previews and fits.
RealMap analysis_window(const RealMap& map);

/// Fit lines shared by the inline reports and `analyze`: annulus metrology
/// for momentum maps, the centroid for position maps.
void add_fit_lines(Report& report, const std::string& stem, const RealMap& full_map);

/// nondiffracting_range, or "n/a" when there are fewer than 3 planes, no
/// z = 0 plane or no finite width at z = 0.
void add_range(Report& report, const std::string& key, const std::vector<double>& z,
               const std::vector<double>& widths, double tolerance);

/// Collects the files of one run and writes manifest.json at the end.
class RunDirectory {
public:
  /// Warnings are echoed to `log` as they arrive.
  RunDirectory(std::filesystem::path dir, const RunConfig& cfg, Scenario scenario,
               std::ostream& log);

  const std::filesystem::path& path() const { return dir_; }
  Report& report() { return report_; }
  const RunConfig& config() const { return cfg_; }

  void warn(const std::string& message);
  void warn_all(const std::vector<std::string>& messages, const std::string& prefix = "");
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Full map as .cfld plus csv/pgm previews of analysis_window(map) (or
  /// `preview` if given), according to the output formats. Adds fit lines.
  void write_map(const std::string& stem, const RealMap& map,
                 const std::optional<RealMap>& preview = std::nullopt);
  void write_text(const std::string& name, const std::string& content);
  void write_image(const std::string& name, const RealMap& map);

  /// Starts/stops a named timing; timings go only into the manifest.
  void time(const std::string& stage);

  /// Writes report.txt and manifest.json.
  void finish();

private:
  void record(const std::string& name);

  std::filesystem::path dir_;
  std::ostream* log_;
  RunConfig cfg_;
  Scenario scenario_;
  std::string resolved_;
  Report report_;
  std::vector<std::string> warnings_;
  std::vector<std::string> files_;
  std::vector<std::pair<std::string, double>> timings_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point stage_start_;
  std::string stage_;
};

}  // namespace ndphoton::cli
