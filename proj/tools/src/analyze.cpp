#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ndphoton/cli/run_dir.hpp"
#include "ndphoton/cli/scenarios.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/field_io.hpp"

namespace ndphoton::cli {
namespace fs = std::filesystem;
namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct SweepPlane {
  std::vector<double> y, c, s;
};

std::map<double, SweepPlane> read_sweep_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  if (line != "z_um,y_um,coincidence,singles") throw IoError(p.string() + ": unexpected header");
  std::map<double, SweepPlane> planes;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[4];
    std::istringstream row(line);
    std::string cell;
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) {
        throw IoError(p.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
      }
      x = std::strtod(cell.c_str(), nullptr);
    }
    SweepPlane& pl = planes[v[0]];
    pl.y.push_back(v[1]);
    pl.c.push_back(v[2]);
    pl.s.push_back(v[3]);
  }
  return planes;
}

double width_or_nan(const std::vector<double>& y, const std::vector<double>& v) {
  try {
    return fwhm(Profile{y, v, Domain::Position});
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::string analyze_run(const fs::path& dir, std::vector<std::string>& warnings) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  Report rep;
  double tolerance = 0.2;
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest)) {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(slurp(manifest));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(manifest.string() + ": " + e.what());
    }
    std::size_t checked = 0;
    for (const auto& o : m.value("outputs", nlohmann::json::array())) {
      const std::string name = o.at("path").get<std::string>();
      const fs::path f = dir / name;
      if (!fs::exists(f)) throw IoError("listed output missing: " + name);
      if (sha256_file(f) != o.at("sha256").get<std::string>()) {
        throw IoError("checksum mismatch: " + name);
      }
      ++checked;
    }
    rep.add("manifest.scenario", m.value("scenario", std::string("unknown")));
    rep.add("manifest.outputs_verified", static_cast<double>(checked));
    if (m.contains("resolved_config") && m.contains("scenario")) {
      try {
        const std::string sc = m["scenario"].get<std::string>();
        const Scenario scenario = sc == "sweep" ? Scenario::Sweep
                                  : sc == "spdc-sim" ? Scenario::SpdcSim
                                                     : Scenario::PumpSim;
        tolerance = resolve(parse_config(m["resolved_config"].get<std::string>(), "manifest"), scenario)
                        .scan.fwhm_tolerance;
      } catch (const Error& e) {
        warnings.push_back(std::string("resolved config in manifest not usable: ") + e.what());
      }
    }
  } else {
    warnings.push_back("no manifest.json in " + dir.string() + "; checksums not verified");
  }

  std::vector<fs::path> fields;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".cfld") fields.push_back(e.path());
  }
  std::sort(fields.begin(), fields.end());
  for (const auto& f : fields) {
    try {
      add_fit_lines(rep, f.stem().string(), read_cfld(f).as_map());
    } catch (const IoError& e) {
      warnings.push_back(std::string("skipped: ") + e.what());
    }
  }

  if (fs::exists(dir / "sweep.csv")) {
    const auto planes = read_sweep_csv(dir / "sweep.csv");
    std::vector<double> zs, wc, ws;
    for (const auto& [z, pl] : planes) {
      zs.push_back(z);
      wc.push_back(width_or_nan(pl.y, pl.c));
      ws.push_back(width_or_nan(pl.y, pl.s));
      const std::string key = "sweep.z_" + format_double(z) + "_um.";
      rep.add(key + "fwhm_c_um", wc.back());
      rep.add(key + "fwhm_s_um", ws.back());
    }
    add_range(rep, "sweep.nondiffracting_range_heralded_um", zs, wc, tolerance);
    add_range(rep, "sweep.nondiffracting_range_singles_um", zs, ws, tolerance);
  }
  for (const auto& w : warnings) rep.add("warning", w);
  return rep.text();
}

}  // namespace ndphoton::cli
