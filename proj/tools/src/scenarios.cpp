#include "ndphoton/cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "ndphoton/beams.hpp"
#include "ndphoton/cli/run_dir.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/optics.hpp"

namespace ndphoton::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_z(double z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "z = %.6g um: ", z);
  return buf;
}

RealMap map_of(const ComplexField& f) { return RealMap::on_grid(f.grid(), f.domain(), intensity(f)); }

std::vector<double> symmetric_samples(double center, double half_width, double step) {
  const auto half = static_cast<std::ptrdiff_t>(std::floor(half_width / step + 1e-9));
  std::vector<double> y;
  for (std::ptrdiff_t j = -half; j <= half; ++j) y.push_back(center + static_cast<double>(j) * step);
  return y;
}

double try_fwhm(const std::vector<double>& y, const std::vector<double>& v, RunDirectory& run,
                const std::string& what) {
  try {
    return fwhm(Profile{y, v, Domain::Position});
  } catch (const Error& e) {
    run.warn(what + " FWHM unavailable: " + e.what());
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void add_fit(Report& r, const std::string& prefix, const std::optional<AnnulusFit>& fit) {
  if (!fit) {
    r.add(prefix + "annulus", std::string("none"));
    return;
  }
  r.add(prefix + "kt_fit_rad_per_um", fit->kt_fit);
  r.add(prefix + "w0_fit_um", fit->w0_fit);
}

}  // namespace

PumpBuild make_pump(const RunConfig& cfg) {
  const GridSpec grid = make_grid(cfg.grid.n, cfg.grid.dx);
  const PumpConfig& p = cfg.pump;
  std::vector<std::string> warnings;
  ComplexField spectrum(grid, Domain::Momentum);
  if (p.mode == PumpMode::BesselGauss) {
    const BGParams bg{p.w0, p.kt, p.wavelength};
    bg.validate();
    spectrum = bg_spectrum(bg, grid);
  } else {
    const AxiconSpec ax = p.axicon();
    ComplexField near = apply_axicon(gaussian_field(p.input_waist, p.wavelength, 0.0, grid), ax,
                                     p.wavelength);
    near = magnify(near, p.magnification);
    spectrum = to_momentum(near);
    if (edge_energy_fraction(spectrum) > 1e-3) {
      warnings.push_back("axicon chain: more than 0.1% of the pump spectrum lies near k_max");
    }
  }
  if (p.signal_wavelength) {
    return {PumpState::make(std::move(spectrum), p.wavelength, *p.signal_wavelength,
                            *p.idler_wavelength),
            std::move(warnings)};
  }
  return {PumpState::degenerate(std::move(spectrum), p.wavelength), std::move(warnings)};
}

double annulus_peak_kx(const PumpState& pump) {
  const ComplexField& s = pump.spectrum();
  const std::size_t n = s.n();
  const std::size_t row = n / 2;
  std::size_t best = n / 2;
  for (std::size_t c = n / 2; c < n; ++c) {
    if (std::norm(s.at(row, c)) > std::norm(s.at(row, best))) best = c;
  }
  double offset = 0.0;
  if (best > n / 2 && best + 1 < n) {
    const double a = std::norm(s.at(row, best - 1));
    const double b = std::norm(s.at(row, best));
    const double c = std::norm(s.at(row, best + 1));
    const double den = a - 2.0 * b + c;
    if (den < 0.0) offset = 0.5 * (a - c) / den;
  }
  return s.grid().k(best) + offset * s.grid().dk();
}

HeraldSpec make_herald(const RunConfig& cfg, const PumpState& pump) {
  HeraldSpec h;
  h.k_center = {cfg.herald.kx ? *cfg.herald.kx : annulus_peak_kx(pump), cfg.herald.ky};
  h.aperture_radius_k =
      fiber_radius_to_k(cfg.herald.fiber_diameter / 2.0, pump.idler_wavelength(), cfg.herald.focal_length);
  h.n_radial = cfg.herald.n_radial;
  h.n_azimuthal = cfg.herald.n_azimuthal;
  h.sampling = cfg.herald.sampling;
  h.validate();
  return h;
}

HeraldSpec make_singles_acceptance(const RunConfig& cfg, const PumpState& pump) {
  HeraldSpec h = default_idler_acceptance(pump, cfg.scan.singles_threshold);
  h.n_radial = cfg.scan.singles_n_radial;
  h.n_azimuthal = cfg.scan.singles_n_azimuthal;
  return h;
}

double fp1_signal_fiber_k(const RunConfig& cfg) {
  return fiber_radius_to_k(cfg.scan.fp1_fiber_diameter / 2.0, cfg.signal_wavelength(),
                           cfg.herald.focal_length);
}

ScanSpec make_scan(const RunConfig& cfg) {
  return ScanSpec{cfg.scan.fp2_fiber_diameter / 2.0, cfg.scan.step, cfg.scan.half_width};
}

ConditionalMaps conditional_maps(const RunConfig& cfg, const PumpState& pump) {
  ConditionalMaps out{make_herald(cfg, pump), RealMap{}, RealMap{}, std::nullopt, std::nullopt};
  out.idler_only = conditional_momentum_map(pump, out.herald, 0.0);
  out.both_fibers = fiber_average(out.idler_only, fp1_signal_fiber_k(cfg));
  out.idler_only_fit = annulus_fit(analysis_window(out.idler_only));
  out.both_fibers_fit = annulus_fit(analysis_window(out.both_fibers));
  return out;
}

SweepResult run_z_sweep(const RunConfig& cfg, const PumpState& pump) {
  const HeraldSpec herald = make_herald(cfg, pump);
  SweepOptions opt;
  opt.route = cfg.scan.route;
  opt.count_rate = cfg.scan.count_rate;
  return z_sweep(pump, herald, cfg.signal_train(), cfg.scan.z, make_scan(cfg),
                 make_singles_acceptance(cfg, pump), opt);
}

// ------------------------------------------------------------------ pump-sim

void run_pump_sim(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  RunDirectory run(dir, cfg, Scenario::PumpSim, log);
  Report& rep = run.report();
  run.time("pump");
  const PumpBuild pb = make_pump(cfg);
  run.warn_all(pb.warnings);
  const PumpState& pump = pb.state;
  const ComplexField& near = pump.near_field();
  const double k_p = kTwoPi / cfg.pump.wavelength;

  rep.add("pump.mode", std::string(cfg.pump.mode == PumpMode::BesselGauss ? "bg" : "axicon-chain"));
  rep.add("pump.grid_dx_um", near.grid().dx());
  rep.add("pump.grid_dk_rad_per_um", near.grid().dk());
  if (cfg.pump.mode == PumpMode::AxiconChain) {
    rep.add("pump.axicon_base_angle_rad", cfg.pump.axicon().base_angle());
    rep.add("pump.axicon_kt_predicted_rad_per_um",
            cfg.pump.axicon().kt(cfg.pump.wavelength) / std::abs(cfg.pump.magnification));
  }

  run.time("maps");
  run.write_map("pump_crystal_intensity", map_of(near));
  const RealMap spectrum_map = map_of(pump.spectrum());
  run.write_map("pump_angular_spectrum", spectrum_map);
  const auto fit = annulus_fit(analysis_window(spectrum_map));

  double kt = cfg.pump.kt;
  double w0 = cfg.pump.w0;
  if (cfg.pump.mode == PumpMode::AxiconChain) {
    kt = fit ? fit->kt_fit : 0.0;
    w0 = fit ? fit->w0_fit : 0.0;
  }
  if (kt > 0.0 && w0 > 0.0) {
    rep.add("pump.z_max_formula_um", z_max_formula(w0, k_p, kt));
  } else {
    rep.add("pump.z_max_formula_um", std::string("n/a"));
  }

  // y-z intensity sheet through the beam axis
  run.time("sheet");
  const std::vector<double>& zs = cfg.pump.sheet_z;
  const double step = near.grid().dx() / 4.0;
  const std::vector<double> y = symmetric_samples(0.0, cfg.pump.sheet_half_width, step);
  std::vector<std::vector<double>> sheet;
  std::vector<double> widths;
  for (double z : zs) {
    const PropagationResult pr = propagate(near, z, cfg.pump.wavelength);
    if (pr.aliasing_risk) run.warn(fmt_z(z) + "pump propagation aliasing risk");
    const IntensitySpectrum is = IntensitySpectrum::from_map(map_of(pr.field));
    sheet.push_back(is.line_y(0.0, y));
    widths.push_back(try_fwhm(y, sheet.back(), run, fmt_z(z) + "pump central lobe"));
  }
  std::string csv = "z_um\\y_um";
  for (double v : y) csv += "," + format_double(v);
  csv += "\n";
  for (std::size_t i = 0; i < zs.size(); ++i) {
    csv += format_double(zs[i]);
    for (double v : sheet[i]) csv += "," + format_double(v);
    csv += "\n";
  }
  if (cfg.output.csv) run.write_text("pump_sheet.csv", csv);
  const std::size_t mid = y.size() / 2;
  std::string wcsv = "z_um,fwhm_um,on_axis\n";
  for (std::size_t i = 0; i < zs.size(); ++i) {
    wcsv += format_double(zs[i]) + "," + format_double(widths[i]) + "," + format_double(sheet[i][mid]) + "\n";
  }
  run.write_text("pump_sheet_fwhm.csv", wcsv);
  if (cfg.output.pgm && !zs.empty()) {
    RealMap img;
    img.nx = y.size();
    img.ny = zs.size();
    img.pitch = step;
    for (const auto& row : sheet) img.values.insert(img.values.end(), row.begin(), row.end());
    run.write_image("pump_sheet.pgm", img);
  }
  add_range(rep, "pump.nondiffracting_range_um", zs, widths, cfg.scan.fwhm_tolerance);
  // the lobe width alone stays flat while the envelope dies out
  std::size_t top = 0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (sheet[i][mid] > sheet[top][mid]) top = i;
  }
  std::string half = "beyond last plane";
  for (std::size_t i = top + 1; i < zs.size(); ++i) {
    const double a = sheet[i - 1][mid], b = sheet[i][mid], h = 0.5 * sheet[top][mid];
    if (b < h) {
      half = format_double(zs[i - 1] + (a - h) / (a - b) * (zs[i] - zs[i - 1]));
      break;
    }
  }
  if (!zs.empty()) rep.add("pump.on_axis_half_intensity_z_um", half);
  run.finish();
}

// ------------------------------------------------------------------ spdc-sim

void run_spdc_sim(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  RunDirectory run(dir, cfg, Scenario::SpdcSim, log);
  Report& rep = run.report();
  run.time("pump");
  const PumpBuild pb = make_pump(cfg);
  run.warn_all(pb.warnings);
  const PumpState& pump = pb.state;
  const OpticalTrain train = cfg.signal_train();

  run.time("momentum_maps");
  const ConditionalMaps maps = conditional_maps(cfg, pump);
  const HeraldSpec& h = maps.herald;
  rep.add("herald.k_center_x_rad_per_um", h.k_center.x);
  rep.add("herald.k_center_y_rad_per_um", h.k_center.y);
  rep.add("herald.aperture_radius_k_rad_per_um", h.aperture_radius_k);
  rep.add("herald.nodes", static_cast<double>(h.aperture_radius_k > 0.0 ? h.n_radial * h.n_azimuthal : 1));
  rep.add("herald.sampling", std::string(to_string(h.sampling)));
  rep.add("scan.fp1_signal_fiber_k_rad_per_um", fp1_signal_fiber_k(cfg));

  run.write_map("spdc_idler_only", maps.idler_only);
  const Window window{-1.0 * h.k_center, cfg.scan.window_half_width};
  run.write_map("spdc_scan", maps.both_fibers, maps.both_fibers.crop(window.center, window.half_width));
  add_fit(rep, "conditional.idler_only.", maps.idler_only_fit);
  add_fit(rep, "conditional.scan.", maps.both_fibers_fit);
  // annulus width from the idler-limited map, radius from the scan
  if (maps.idler_only_fit) rep.add("conditional.w0_eff_um", maps.idler_only_fit->w0_fit);
  if (maps.both_fibers_fit) rep.add("conditional.kt_rad_per_um", maps.both_fibers_fit->kt_fit);

  double mag = 1.0;
  if (const auto m = ray_matrix(train)) mag = std::abs(m->a);
  rep.add("train.magnification", mag);
  if (maps.idler_only_fit && maps.both_fibers_fit) {
    rep.add("conditional.z_max_formula_um",
            z_max_formula(maps.idler_only_fit->w0_fit, pump.k_signal(), maps.both_fibers_fit->kt_fit, mag));
  }

  run.time("fp2");
  const MixtureResult mix = heralded_intensity(pump, h, train, 0.0, {cfg.scan.route, false});
  run.warn_all(mix.warnings, "FP2: ");
  rep.add("fp2.route", std::string(to_string(mix.route)));
  rep.add("fp2.chief_ray_x_um", mix.chief_ray.x);
  rep.add("fp2.chief_ray_y_um", mix.chief_ray.y);
  const double r_fiber = cfg.scan.fp2_fiber_diameter / 2.0;
  const IntensitySpectrum fiber = mix.intensity.disk_averaged(r_fiber);
  run.write_map("fp2_heralded", mix.map);
  run.write_map("fp2_heralded_fiber", fiber.map());

  const GridSpec& g = mix.intensity.grid();
  const double step = cfg.scan.step > 0.0 ? cfg.scan.step : g.dx() / 4.0;
  const double edge = g.extent() / 2.0 - g.dx();
  const double hw = cfg.scan.half_width > 0.0 ? std::min(cfg.scan.half_width, edge) : edge;
  const std::vector<double> y = symmetric_samples(mix.chief_ray.y, hw, step);
  const std::vector<double> point = mix.intensity.line_y(mix.chief_ray.x, y);
  const std::vector<double> with_fiber = fiber.line_y(mix.chief_ray.x, y);
  std::string csv = "y_um,point,fiber\n";
  for (std::size_t i = 0; i < y.size(); ++i) {
    csv += format_double(y[i]) + "," + format_double(point[i]) + "," + format_double(with_fiber[i]) + "\n";
  }
  if (cfg.output.csv) run.write_text("fp2_profile.csv", csv);
  rep.add("fp2.fwhm_point_um", try_fwhm(y, point, run, "FP2 point"));
  rep.add("fp2.fwhm_fiber_um", try_fwhm(y, with_fiber, run, "FP2 fiber"));
  run.finish();
}

// --------------------------------------------------------------------- sweep

void run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  RunDirectory run(dir, cfg, Scenario::Sweep, log);
  Report& rep = run.report();
  run.time("pump");
  const PumpBuild pb = make_pump(cfg);
  run.warn_all(pb.warnings);
  run.time("sweep");
  const SweepResult s = run_z_sweep(cfg, pb.state);
  run.warn_all(s.warnings);

  std::string csv = "z_um,y_um,coincidence,singles\n";
  std::string summary = "z_um,R_c,R_s,fwhm_c_um,fwhm_s_um,R_c_over_R_s\n";
  std::vector<double> zs;
  std::vector<double> wc;
  std::vector<double> ws;
  for (const PlaneResult& p : s.planes) {
    for (std::size_t i = 0; i < p.y.size(); ++i) {
      csv += format_double(p.z) + "," + format_double(p.y[i]) + "," + format_double(p.coincidence[i]) +
             "," + format_double(p.singles[i]) + "\n";
    }
    summary += format_double(p.z) + "," + format_double(p.r_c) + "," + format_double(p.r_s) + "," +
               format_double(p.fwhm_c) + "," + format_double(p.fwhm_s) + "," +
               format_double(p.r_c / p.r_s) + "\n";
    zs.push_back(p.z);
    wc.push_back(p.fwhm_c);
    ws.push_back(p.fwhm_s);
  }
  run.write_text("sweep.csv", csv);
  run.write_text("sweep_summary.csv", summary);

  rep.add("sweep.planes", static_cast<double>(s.planes.size()));
  rep.add("sweep.scale", s.scale);
  const PlaneResult& first = s.planes.front();
  const PlaneResult& last = s.planes.back();
  rep.add("sweep.fwhm_c_first_um", first.fwhm_c);
  rep.add("sweep.fwhm_s_first_um", first.fwhm_s);
  rep.add("sweep.ratio_gain_last_over_first", (last.r_c / last.r_s) / (first.r_c / first.r_s));
  add_range(rep, "sweep.nondiffracting_range_heralded_um", zs, wc, cfg.scan.fwhm_tolerance);
  add_range(rep, "sweep.nondiffracting_range_singles_um", zs, ws, cfg.scan.fwhm_tolerance);
  run.finish();
}

}  // namespace ndphoton::cli
