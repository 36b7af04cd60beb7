#include "ndphoton/cli/run_dir.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ndphoton/error.hpp"
#include "ndphoton/field_io.hpp"
#include "ndphoton/version.hpp"

namespace ndphoton::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

void Report::add(const std::string& key, double value) { lines_.emplace_back(key, format_double(value)); }

void Report::add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }

std::string Report::text() const {
  std::string s;
  for (const auto& [k, v] : lines_) s += k + " = " + v + "\n";
  return s;
}

namespace {

std::string to_hex(const unsigned char* d, unsigned int n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < n; ++i) {
    s += digits[d[i] >> 4];
    s += digits[d[i] & 15];
  }
  return s;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  return to_hex(md, len);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

RealMap analysis_window(const RealMap& map) {
  const Vec2 c = centroid(map);
  double total = 0.0;
  for (double v : map.values) total += std::abs(v);
  const std::size_t bins = std::max(map.nx, map.ny) + 1;
  std::vector<double> hist(bins, 0.0);
  for (std::size_t r = 0; r < map.ny; ++r) {
    for (std::size_t col = 0; col < map.nx; ++col) {
      const double d = std::max(std::abs(map.x(col) - c.x), std::abs(map.y(r) - c.y));
      const auto b = std::min(bins - 1, static_cast<std::size_t>(std::ceil(d / map.pitch)));
      hist[b] += std::abs(map.at(r, col));
    }
  }
  double acc = 0.0;
  std::size_t b = 0;
  for (; b < bins; ++b) {
    acc += hist[b];
    if (acc >= (1.0 - 1e-4) * total) break;
  }
  return map.crop(c, static_cast<double>(std::max<std::size_t>(b, 4) + 2) * map.pitch);
}

void add_fit_lines(Report& report, const std::string& stem, const RealMap& full_map) {
  const std::string p = "fit." + stem + ".";
  if (full_map.domain == Domain::Momentum) {
    const auto fit = annulus_fit(analysis_window(full_map));
    if (!fit) {
      report.add(p + "annulus", std::string("none"));
      return;
    }
    report.add(p + "kt_fit_rad_per_um", fit->kt_fit);
    report.add(p + "delta_k_rad_per_um", fit->delta_k);
    report.add(p + "w0_fit_um", fit->w0_fit);
    report.add(p + "center_x_rad_per_um", fit->center.x);
    report.add(p + "center_y_rad_per_um", fit->center.y);
    report.add(p + "residual", fit->residual);
  } else {
    const Vec2 c = centroid(full_map);
    report.add(p + "centroid_x_um", c.x);
    report.add(p + "centroid_y_um", c.y);
    report.add(p + "peak", full_map.max());
  }
}

RunDirectory::RunDirectory(fs::path dir, const RunConfig& cfg, Scenario scenario,
                           std::ostream& log)
    : dir_(std::move(dir)),
      log_(&log),
      cfg_(cfg),
      scenario_(scenario),
      resolved_(to_text(cfg)),
      start_(std::chrono::steady_clock::now()),
      stage_start_(start_) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw IoError("cannot create run directory " + dir_.string());
  }
  write_text("resolved.cfg", resolved_);
  report_.add("tool", std::string("ndphoton ") + kVersion);
  report_.add("scenario", std::string(to_string(scenario)));
  report_.add("config_sha256", sha256_hex(resolved_));
}

void RunDirectory::warn(const std::string& message) {
  if (std::find(warnings_.begin(), warnings_.end(), message) == warnings_.end()) {
    warnings_.push_back(message);
    *log_ << "warning: " << message << "\n";
  }
}

void RunDirectory::warn_all(const std::vector<std::string>& messages, const std::string& prefix) {
  for (const auto& m : messages) warn(prefix + m);
}

void RunDirectory::record(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void RunDirectory::write_text(const std::string& name, const std::string& content) {
  const fs::path p = dir_ / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + p.string());
  record(name);
}

void add_range(Report& report, const std::string& key, const std::vector<double>& z,
               const std::vector<double>& widths, double tolerance) {
  const auto at0 = std::find(z.begin(), z.end(), 0.0);
  if (z.size() < 3 || at0 == z.end() || !std::isfinite(widths[at0 - z.begin()])) {
    report.add(key, std::string("n/a"));
    return;
  }
  report.add(key, nondiffracting_range(z, widths, tolerance));
}

void RunDirectory::write_image(const std::string& name, const RealMap& map) {
  write_pgm(dir_ / name, map);
  record(name);
}

void RunDirectory::write_map(const std::string& stem, const RealMap& map,
                             const std::optional<RealMap>& preview) {
  const RealMap window = preview ? *preview : analysis_window(map);
  if (cfg_.output.cfld && map.grid) {
    write_cfld(dir_ / (stem + ".cfld"), map);
    record(stem + ".cfld");
  }
  if (cfg_.output.csv) {
    write_map_csv(dir_ / (stem + ".csv"), window);
    record(stem + ".csv");
  }
  if (cfg_.output.pgm) {
    write_pgm(dir_ / (stem + ".pgm"), window);
    record(stem + ".pgm");
  }
  add_fit_lines(report_, stem, map);
}

void RunDirectory::time(const std::string& stage) {
  const auto now = std::chrono::steady_clock::now();
  if (!stage_.empty()) {
    timings_.emplace_back(stage_, std::chrono::duration<double>(now - stage_start_).count());
  }
  stage_ = stage;
  stage_start_ = now;
}

void RunDirectory::finish() {
  time("");
  for (const auto& w : warnings_) report_.add("warning", w);
  write_text("report.txt", report_.text());

  nlohmann::ordered_json m;
  m["tool"] = "ndphoton";
  m["version"] = kVersion;
  m["scenario"] = to_string(scenario_);
  m["config_sha256"] = sha256_hex(resolved_);
  m["resolved_config"] = resolved_;
  std::vector<std::string> sorted = files_;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& f : sorted) {
    outputs.push_back({{"path", f},
                       {"sha256", sha256_file(dir_ / f)},
                       {"bytes", static_cast<std::uint64_t>(fs::file_size(dir_ / f))}});
  }
  m["outputs"] = outputs;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto& [name, secs] : timings_) timings[name] = secs;
  timings["total_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  m["timings"] = timings;
  m["warnings"] = warnings_;

  const fs::path p = dir_ / "manifest.json";
  std::ofstream out(p, std::ios::binary);
  out << m.dump(2) << "\n";
  out.close();
  if (!out) throw IoError("cannot write " + p.string());
}

}  // namespace ndphoton::cli
