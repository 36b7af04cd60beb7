#include "ndphoton/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "mixture.hpp"
#include "ndphoton/analysis.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"

namespace ndphoton {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxLostEnergy = 1e-6;

std::string fmt_z(double z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "z = %.6g um: ", z);
  return buf;
}

void check_train_wavelength(const OpticalTrain& train, const PumpState& pump) {
  if (std::abs(train.wavelength - pump.signal_wavelength()) >
      1e-9 * pump.signal_wavelength()) {
    throw DomainError("signal train wavelength does not match the signal wavelength");
  }
}

MixtureRoute choose_route(MixtureRoute requested, const OpticalTrain& full) {
  const bool covariant_ok = ray_matrix(full).has_value();
  if (requested == MixtureRoute::Covariant && !covariant_ok) {
    throw DomainError("covariant mixture route needs a train without apertures or axicons");
  }
  if (requested == MixtureRoute::Auto) {
    return covariant_ok ? MixtureRoute::Covariant : MixtureRoute::Literal;
  }
  return requested;
}

}  // namespace

// ---------------------------------------------------------------- PumpState

namespace {

ComplexField unit_spectrum(ComplexField s) {
  if (s.domain() != Domain::Momentum) {
    throw DomainTagError("pump spectrum must be a momentum-domain field");
  }
  normalize_energy(s);
  return s;
}

}  // namespace

PumpState::PumpState(ComplexField spectrum, double lp, double ls, double li)
    : spectrum_(unit_spectrum(std::move(spectrum))),
      near_field_(to_position(spectrum_)),
      lp_(lp),
      ls_(ls),
      li_(li) {
  if (!(lp > 0.0) || !(ls > 0.0) || !(li > 0.0)) throw DomainError("wavelengths must be > 0");
  if (std::abs(1.0 / ls + 1.0 / li - 1.0 / lp) > 1e-9 / lp) {
    throw DomainError("energy conservation 1/ls + 1/li = 1/lp violated");
  }
}

PumpState PumpState::degenerate(ComplexField spectrum, double pump_wavelength) {
  return PumpState(std::move(spectrum), pump_wavelength, 2.0 * pump_wavelength,
                   2.0 * pump_wavelength);
}

PumpState PumpState::make(ComplexField spectrum, double pump_wavelength, double signal_wavelength,
                          double idler_wavelength) {
  return PumpState(std::move(spectrum), pump_wavelength, signal_wavelength, idler_wavelength);
}

double PumpState::k_signal() const { return kTwoPi / ls_; }
double PumpState::k_idler() const { return kTwoPi / li_; }

// --------------------------------------------------------------- HeraldSpec

const char* to_string(HeraldSampling s) {
  return s == HeraldSampling::Polar ? "polar" : "exact_disk";
}

const char* to_string(MixtureRoute r) {
  switch (r) {
    case MixtureRoute::Auto: return "auto";
    case MixtureRoute::Literal: return "literal";
    case MixtureRoute::Covariant: return "covariant";
  }
  return "?";
}

void HeraldSpec::validate() const {
  if (!(aperture_radius_k >= 0.0) || !std::isfinite(aperture_radius_k)) {
    throw DomainError("herald aperture radius must be finite and >= 0");
  }
  if (n_radial == 0 || n_azimuthal == 0) {
    throw DomainError("herald quadrature needs n_radial >= 1 and n_azimuthal >= 1");
  }
  if (!std::isfinite(k_center.x) || !std::isfinite(k_center.y)) {
    throw DomainError("herald centre must be finite");
  }
}

std::vector<WeightedPoint> HeraldSpec::nodes() const {
  validate();
  return disk_quadrature(k_center, aperture_radius_k, n_radial, n_azimuthal);
}

double HeraldSpec::total_weight() const {
  return aperture_radius_k > 0.0 ? std::numbers::pi * aperture_radius_k * aperture_radius_k : 1.0;
}

double fiber_radius_to_k(double fiber_radius, double wavelength, double focal_length) {
  if (!(fiber_radius >= 0.0) || !(wavelength > 0.0) || focal_length == 0.0) {
    throw DomainError("fiber_radius_to_k: need r >= 0, wavelength > 0, f != 0");
  }
  return fiber_radius * (kTwoPi / wavelength) / std::abs(focal_length);
}

// ------------------------------------------------------ conditional_spectrum

ComplexField conditional_spectrum(const PumpState& pump, Vec2 k_i) {
  const GridSpec& grid = pump.spectrum().grid();
  const double dk = grid.dk();
  const double sx = k_i.x / dk;
  const double sy = k_i.y / dk;
  const double ix = std::round(sx);
  const double iy = std::round(sy);
  const double fx = (sx - ix) * dk;
  const double fy = (sy - iy) * dk;
  const auto n = static_cast<std::ptrdiff_t>(grid.n());
  if (std::abs(ix) >= n || std::abs(iy) >= n) {
    throw ShiftOverflowError("idler wavevector shifts the spectrum off the grid");
  }

  // Fractional part: S(k + f) is the transform of s(x) exp(-i f.x).
  ComplexField shifted = pump.spectrum();
  if (fx != 0.0 || fy != 0.0) {
    ComplexField s = pump.near_field();
    const std::size_t m = grid.n();
    std::vector<cplx> ex(m);
    std::vector<cplx> ey(m);
    for (std::size_t i = 0; i < m; ++i) {
      ex[i] = std::polar(1.0, -fx * grid.x(i));
      ey[i] = std::polar(1.0, -fy * grid.x(i));
    }
    auto v = s.values();
    parallel_for(0, m, [&](std::size_t r) {
      for (std::size_t c = 0; c < m; ++c) v[r * m + c] *= ey[r] * ex[c];
    });
    shifted = to_momentum(s);
  }

  // Integer part: A[m] = S[m + i], zero-filled.
  const auto dx = static_cast<std::ptrdiff_t>(ix);
  const auto dy = static_cast<std::ptrdiff_t>(iy);
  ComplexField out(grid, Domain::Momentum);
  auto dst = out.values();
  const auto src = shifted.values();
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const std::ptrdiff_t sr = r + dy;
    if (sr < 0 || sr >= n) continue;
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      const std::ptrdiff_t sc = c + dx;
      if (sc < 0 || sc >= n) continue;
      dst[r * n + c] = src[sr * n + sc];
    }
  }
  const double e_in = energy(shifted);
  const double e_out = energy(out);
  const double lost = e_in > 0.0 ? 1.0 - e_out / e_in : 0.0;
  if (lost > kMaxLostEnergy) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "shift by k_i = (%.6g, %.6g) rad/um pushes %.3g of the spectrum energy off "
                  "the grid (limit %.0e)",
                  k_i.x, k_i.y, lost, kMaxLostEnergy);
    throw ShiftOverflowError(buf);
  }
  normalize_energy(out);
  return out;
}

// -------------------------------------------------------------- mixtures

MixtureResult heralded_intensity(const PumpState& pump, const HeraldSpec& herald,
                                 const OpticalTrain& train, double z,
                                 const MixtureOptions& options) {
  herald.validate();
  check_train_wavelength(train, pump);
  const OpticalTrain full = detail::extended_train(train, z);
  full.validate();
  const MixtureRoute route = choose_route(options.route, full);

  if (route == MixtureRoute::Covariant) {
    return detail::covariant_mixture(detail::covariant_base(pump, herald.k_center, full), herald,
                                     options.normalize_peak);
  }

  std::vector<std::string> warnings;
  std::optional<RealMap> sum;
  for (const WeightedPoint& node : herald.nodes()) {
    RealMap img = detail::node_intensity(pump, node.k, full, &warnings);
    if (!sum) {
      sum = RealMap(img);
      std::fill(sum->values.begin(), sum->values.end(), 0.0);
    }
    for (std::size_t i = 0; i < img.values.size(); ++i) sum->values[i] += node.weight * img.values[i];
  }
  std::optional<double> spk;
  Vec2 chief{};
  if (const auto m = ray_matrix(full)) {
    spk = -m->b / pump.k_signal();
    chief = *spk * herald.k_center;
  } else {
    chief = centroid(*sum);
  }
  return detail::finish_mixture(IntensitySpectrum::from_map(*sum), route, spk, chief,
                                std::move(warnings), options.normalize_peak);
}

double acceptance_coverage_change(const PumpState& pump, const HeraldSpec& acceptance,
                                  const OpticalTrain& train, double z, double factor) {
  acceptance.validate();
  check_train_wavelength(train, pump);
  const OpticalTrain full = detail::extended_train(train, z);
  full.validate();
  return detail::coverage_change(detail::covariant_base(pump, acceptance.k_center, full),
                                 acceptance, factor);
}

namespace {

void add_coverage_warning(MixtureResult& res, double change) {
  if (change <= 0.01) return;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "singles coverage: enlarging the idler acceptance by 25%% changes the map by "
                "%.3g (> 1%%)",
                change);
  res.warnings.push_back(buf);
}

MixtureResult singles_from_base(const detail::CovariantBase& base, const HeraldSpec& acceptance,
                                bool normalize) {
  MixtureResult res = detail::covariant_mixture(base, acceptance, normalize);
  if (acceptance.aperture_radius_k > 0.0) {
    add_coverage_warning(res, detail::coverage_change(base, acceptance, 1.25));
  }
  return res;
}

}  // namespace

MixtureResult unconditioned_intensity(const PumpState& pump, const HeraldSpec& acceptance,
                                      const OpticalTrain& train, double z,
                                      const MixtureOptions& options) {
  acceptance.validate();
  check_train_wavelength(train, pump);
  const OpticalTrain full = detail::extended_train(train, z);
  full.validate();
  if (choose_route(options.route, full) == MixtureRoute::Covariant) {
    return singles_from_base(detail::covariant_base(pump, acceptance.k_center, full), acceptance,
                             options.normalize_peak);
  }
  return heralded_intensity(pump, acceptance, train, z, options);
}

double idler_acceptance_radius(const PumpState& pump, double threshold) {
  const ComplexField& s = pump.spectrum();
  const std::size_t n = s.n();
  const auto v = s.values();
  std::vector<double> rows(n, 0.0);
  std::vector<double> cols(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double e = std::norm(v[r * n + c]);
      rows[r] += e;
      cols[c] += e;
    }
  }
  double total = 0.0;
  for (double e : rows) total += e;
  // Largest integer shift in one direction keeping >= threshold on the grid.
  auto max_shift = [&](const std::vector<double>& marginal, bool positive) {
    std::size_t best = 0;
    for (std::size_t shift = 1; shift < n; ++shift) {
      double kept = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool stays = positive ? (i >= shift) : (i + shift < n);
        if (stays) kept += marginal[i];
      }
      if (kept < threshold * total) break;
      best = shift;
    }
    return best;
  };
  const std::size_t m = std::min({max_shift(rows, true), max_shift(rows, false),
                                  max_shift(cols, true), max_shift(cols, false)});
  return static_cast<double>(m) * s.grid().dk();
}

HeraldSpec default_idler_acceptance(const PumpState& pump, double threshold) {
  HeraldSpec h;
  h.aperture_radius_k = idler_acceptance_radius(pump, threshold);
  h.n_radial = 24;
  h.n_azimuthal = 48;
  h.sampling = HeraldSampling::ExactDisk;
  return h;
}

// ------------------------------------------------------- momentum-space scans

RealMap conditional_momentum_map(const PumpState& pump, const HeraldSpec& herald,
                                 double signal_fiber_radius_k) {
  herald.validate();
  if (!(signal_fiber_radius_k >= 0.0)) throw DomainError("signal fiber radius must be >= 0");
  const GridSpec& grid = pump.spectrum().grid();
  if (herald.sampling == HeraldSampling::ExactDisk && herald.aperture_radius_k > 0.0) {
    RealMap centre = RealMap::on_grid(grid, Domain::Momentum,
                                      intensity(conditional_spectrum(pump, herald.k_center)));
    RealMap mixed = detail::disk_average(centre, herald.aperture_radius_k);
    for (double& v : mixed.values) v *= herald.total_weight();
    return detail::disk_average(mixed, signal_fiber_radius_k);
  }
  std::vector<double> acc(grid.size(), 0.0);
  for (const WeightedPoint& node : herald.nodes()) {
    const ComplexField a = conditional_spectrum(pump, node.k);
    const auto v = a.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += node.weight * std::norm(v[i]);
  }
  RealMap map = RealMap::on_grid(grid, Domain::Momentum, std::move(acc));
  return detail::disk_average(map, signal_fiber_radius_k);
}

RealMap fiber_average(const RealMap& map, double radius) {
  return detail::disk_average(map, radius);
}

RealMap conditional_spectrum_scan(const PumpState& pump, const HeraldSpec& herald,
                                  double signal_fiber_radius_k, const Window& window) {
  const GridSpec& grid = pump.spectrum().grid();
  const double lo = grid.k(0);
  const double hi = grid.k(grid.n() - 1);
  if (!(window.half_width > 0.0) || window.center.x - window.half_width < lo ||
      window.center.x + window.half_width > hi || window.center.y - window.half_width < lo ||
      window.center.y + window.half_width > hi) {
    throw DomainError("scan window must have positive half-width and lie inside the grid");
  }
  return conditional_momentum_map(pump, herald, signal_fiber_radius_k)
      .crop(window.center, window.half_width);
}

// ------------------------------------------------------------------ z_sweep

SweepResult z_sweep(const PumpState& pump, const HeraldSpec& herald, const OpticalTrain& train,
                    const std::vector<double>& z_list, const ScanSpec& scan,
                    const std::optional<HeraldSpec>& acceptance, const SweepOptions& options) {
  if (z_list.empty()) throw DomainError("z list is empty");
  for (std::size_t i = 1; i < z_list.size(); ++i) {
    if (!(z_list[i] > z_list[i - 1])) throw DomainError("z list must be strictly increasing");
  }
  if (!(scan.fiber_radius >= 0.0) || !(scan.step >= 0.0) || !(scan.half_width >= 0.0)) {
    throw DomainError("scan fiber radius, step and half-width must be >= 0");
  }
  const HeraldSpec singles_spec = acceptance ? *acceptance : default_idler_acceptance(pump);
  const MixtureOptions mix{options.route, false};

  SweepResult result;
  for (double z : z_list) {
    const OpticalTrain full = detail::extended_train(train, z);
    std::optional<MixtureResult> coinc_opt;
    std::optional<MixtureResult> singles_opt;
    if (choose_route(options.route, full) == MixtureRoute::Covariant &&
        herald.k_center == singles_spec.k_center) {
      // One propagation serves both mixtures.
      herald.validate();
      singles_spec.validate();
      check_train_wavelength(train, pump);
      full.validate();
      const detail::CovariantBase base = detail::covariant_base(pump, herald.k_center, full);
      coinc_opt = detail::covariant_mixture(base, herald, false);
      singles_opt = singles_from_base(base, singles_spec, false);
    } else {
      coinc_opt = heralded_intensity(pump, herald, train, z, mix);
      singles_opt = unconditioned_intensity(pump, singles_spec, train, z, mix);
    }
    const MixtureResult& coinc = *coinc_opt;
    const MixtureResult& singles = *singles_opt;
    for (const auto* r : {&coinc, &singles}) {
      for (const auto& w : r->warnings) {
        const std::string line = fmt_z(z) + w;
        if (std::find(result.warnings.begin(), result.warnings.end(), line) ==
            result.warnings.end()) {
          result.warnings.push_back(line);
        }
      }
    }

    const GridSpec& g = coinc.intensity.grid();
    const double step = scan.step > 0.0 ? scan.step : g.dx() / 4.0;
    const double edge = g.extent() / 2.0 - g.dx();
    const double hw = scan.half_width > 0.0 ? scan.half_width : edge;
    if (hw > edge + 1e-9 * edge) {
      throw DomainError("scan half-width exceeds the observation grid");
    }
    const auto half = static_cast<std::ptrdiff_t>(std::floor(hw / step + 1e-9));
    PlaneResult plane;
    plane.z = z;
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      plane.y.push_back(coinc.chief_ray.y + static_cast<double>(j) * step);
    }
    const double x0 = coinc.chief_ray.x;
    plane.coincidence = coinc.intensity.disk_averaged(scan.fiber_radius).line_y(x0, plane.y);
    plane.singles = singles.intensity.disk_averaged(scan.fiber_radius).line_y(x0, plane.y);
    plane.r_c = *std::max_element(plane.coincidence.begin(), plane.coincidence.end());
    plane.r_s = *std::max_element(plane.singles.begin(), plane.singles.end());

    auto width = [&](const std::vector<double>& values, const char* what) {
      try {
        return fwhm(Profile{plane.y, values, Domain::Position});
      } catch (const Error& e) {
        result.warnings.push_back(fmt_z(z) + what + " FWHM unavailable: " + e.what());
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    plane.fwhm_c = width(plane.coincidence, "coincidence");
    plane.fwhm_s = width(plane.singles, "singles");
    result.planes.push_back(std::move(plane));
  }

  if (options.count_rate > 0.0 && result.planes.front().r_c > 0.0) {
    result.scale = options.count_rate / result.planes.front().r_c;
    for (auto& p : result.planes) {
      for (double& v : p.coincidence) v *= result.scale;
      for (double& v : p.singles) v *= result.scale;
      p.r_c *= result.scale;
      p.r_s *= result.scale;
    }
  }
  return result;
}

}  // namespace ndphoton
