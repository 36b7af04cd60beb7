#include "mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"
#include "ndphoton/special_functions.hpp"

namespace ndphoton {
namespace detail {
namespace {

// Kernel terms below this fraction of the spectrum's peak are left at zero.
constexpr double kSpectrumFloor = 1e-13;

ComplexField real_to_field(const GridSpec& grid, Domain domain, const std::vector<double>& v) {
  std::vector<cplx> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = {v[i], 0.0};
  return ComplexField(grid, domain, std::move(c));
}

template <class G>
void multiply_spectrum(ComplexField& spectrum, G&& g) {
  const std::size_t n = spectrum.n();
  auto v = spectrum.values();
  parallel_for(0, n, [&](std::size_t r) {
    const double qy = spectrum.coord(r);
    for (std::size_t c = 0; c < n; ++c) {
      cplx& s = v[r * n + c];
      if (s != 0.0) s *= g(spectrum.coord(c), qy);
    }
  });
}

}  // namespace

std::vector<double> real_nonnegative(const ComplexField& field) {
  const auto v = field.values();
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i].real(), 0.0);
  return out;
}

OpticalTrain extended_train(const OpticalTrain& train, double z) {
  OpticalTrain full = train;
  if (z != 0.0 || full.stages.empty()) full.stages.push_back({FreeSpace{z}, {}});
  return full;
}

RealMap node_intensity(const PumpState& pump, Vec2 k, const OpticalTrain& full,
                       std::vector<std::string>* warnings) {
  TrainResult res = run_train(to_position(conditional_spectrum(pump, k)), full);
  if (warnings) {
    for (auto& w : res.warnings) {
      if (std::find(warnings->begin(), warnings->end(), w) == warnings->end()) {
        warnings->push_back(std::move(w));
      }
    }
  }
  return RealMap::on_grid(res.output.grid(), Domain::Position, intensity(res.output));
}

CovariantBase covariant_base(const PumpState& pump, Vec2 k_center, const OpticalTrain& full) {
  const auto m = ray_matrix(full);
  if (!m) throw DomainError("covariant mixture needs a train with a paraxial ray matrix");
  std::vector<std::string> warnings;
  const RealMap img = node_intensity(pump, k_center, full, &warnings);
  const double shift_per_k = -m->b / pump.k_signal();
  return {to_momentum(real_to_field(*img.grid, Domain::Position, img.values)), shift_per_k,
          k_center, shift_per_k * k_center, std::move(warnings)};
}

ComplexField apply_herald_kernel(const CovariantBase& base, const HeraldSpec& herald) {
  herald.validate();
  ComplexField out = base.spectrum;
  const auto v = out.values();
  double peak = 0.0;
  for (const cplx& c : v) peak = std::max(peak, std::abs(c));
  const double floor = kSpectrumFloor * peak;

  for (cplx& c : out.values()) {
    if (std::abs(c) <= floor) c = 0.0;
  }

  const double a = herald.aperture_radius_k;
  if (herald.sampling == HeraldSampling::ExactDisk && a > 0.0) {
    const double radius = std::abs(base.shift_per_k) * a;
    const double w = std::numbers::pi * a * a;
    multiply_spectrum(out, [&](double qx, double qy) {
      return w * jinc(std::hypot(qx, qy) * radius);
    });
    return out;
  }

  // exp(-i q.s_j) factorises into a row phase and a column phase per node.
  const std::vector<WeightedPoint> nodes = herald.nodes();
  const std::size_t n = out.n();
  const std::size_t m = nodes.size();
  std::vector<cplx> col(m * n);
  std::vector<cplx> row(m * n);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 shift = base.shift_per_k * (nodes[j].k - base.k_center);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = out.coord(i);
      col[j * n + i] = std::polar(1.0, -q * shift.x);
      row[j * n + i] = nodes[j].weight * std::polar(1.0, -q * shift.y);
    }
  }
  auto vv = out.values();
  parallel_for(0, n, [&](std::size_t r) {
    for (std::size_t c = 0; c < n; ++c) {
      cplx& s = vv[r * n + c];
      if (s == 0.0) continue;
      cplx phi{};
      for (std::size_t j = 0; j < m; ++j) phi += row[j * n + r] * col[j * n + c];
      s *= phi;
    }
  });
  return out;
}

MixtureResult finish_mixture(IntensitySpectrum spec, MixtureRoute route,
                             std::optional<double> shift_per_k, Vec2 chief,
                             std::vector<std::string> warnings, bool normalize) {
  RealMap map = spec.map();
  if (normalize) {
    const double peak = map.max();
    if (peak > 0.0) {
      spec = spec.scaled(1.0 / peak);
      for (double& v : map.values) v /= peak;
    }
  }
  return {std::move(spec), std::move(map), route, shift_per_k, chief, std::move(warnings)};
}

MixtureResult covariant_mixture(const CovariantBase& base, const HeraldSpec& herald,
                                bool normalize) {
  return finish_mixture(IntensitySpectrum(apply_herald_kernel(base, herald)),
                        MixtureRoute::Covariant, base.shift_per_k, base.chief_ray, base.warnings,
                        normalize);
}

double coverage_change(const CovariantBase& base, const HeraldSpec& herald, double factor) {
  HeraldSpec bigger = herald;
  bigger.aperture_radius_k *= factor;
  const ComplexField a = apply_herald_kernel(base, herald);
  const ComplexField b = apply_herald_kernel(base, bigger);
  const double wa = 1.0 / herald.total_weight();
  const double wb = 1.0 / bigger.total_weight();
  const auto va = a.values();
  const auto vb = b.values();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    num += std::norm(wa * va[i] - wb * vb[i]);
    den += std::norm(wa * va[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

RealMap disk_average(const RealMap& map, double radius) {
  if (!map.grid) throw DomainError("disk_average needs a full-grid map");
  if (!(radius >= 0.0)) throw DomainError("disk radius must be >= 0");
  if (radius == 0.0) return map;
  // Treat the samples as a position-domain array of pitch map.pitch.
  const GridSpec as_position = GridSpec::make(map.nx, map.pitch);
  ComplexField spectrum = to_momentum(real_to_field(as_position, Domain::Position, map.values));
  multiply_spectrum(spectrum,
                    [&](double qx, double qy) { return jinc(std::hypot(qx, qy) * radius); });
  RealMap out = map;
  out.values = real_nonnegative(to_position(spectrum));
  return out;
}

}  // namespace detail

IntensitySpectrum::IntensitySpectrum(ComplexField spectrum) : spectrum_(std::move(spectrum)) {
  if (spectrum_.domain() != Domain::Momentum) {
    throw DomainTagError("IntensitySpectrum holds a momentum-domain transform");
  }
}

IntensitySpectrum IntensitySpectrum::from_map(const RealMap& map) {
  if (!map.grid || map.domain != Domain::Position) {
    throw DomainError("IntensitySpectrum::from_map needs a full position-domain grid map");
  }
  std::vector<cplx> c(map.values.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {map.values[i], 0.0};
  return IntensitySpectrum(to_momentum(ComplexField(*map.grid, Domain::Position, std::move(c))));
}

RealMap IntensitySpectrum::map() const {
  return RealMap::on_grid(grid(), Domain::Position,
                          detail::real_nonnegative(to_position(spectrum_)));
}

std::vector<double> IntensitySpectrum::line_y(double x0, const std::vector<double>& y) const {
  const std::size_t n = spectrum_.n();
  const auto v = spectrum_.values();
  // Collapse the qx sum at x = x0 first: g(qy) = sum_qx S(qx, qy) e^{i qx x0}.
  std::vector<cplx> ex(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double ph = spectrum_.coord(c) * x0;
    ex[c] = {std::cos(ph), std::sin(ph)};
  }
  std::vector<cplx> g(n);
  parallel_for(0, n, [&](std::size_t r) {
    cplx s{};
    for (std::size_t c = 0; c < n; ++c) s += v[r * n + c] * ex[c];
    g[r] = s;
  });
  const double dk = grid().dk();
  const double scale = dk * dk / (2.0 * std::numbers::pi);
  std::vector<double> out(y.size());
  parallel_for(0, y.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (g[r] == 0.0) continue;
      const double ph = spectrum_.coord(r) * y[i];
      s += g[r].real() * std::cos(ph) - g[r].imag() * std::sin(ph);
    }
    out[i] = std::max(s * scale, 0.0);
  });
  return out;
}

IntensitySpectrum IntensitySpectrum::disk_averaged(double radius) const {
  if (!(radius >= 0.0)) throw DomainError("disk radius must be >= 0");
  ComplexField out = spectrum_;
  if (radius > 0.0) {
    detail::multiply_spectrum(out, [&](double qx, double qy) {
      return jinc(std::hypot(qx, qy) * radius);
    });
  }
  return IntensitySpectrum(std::move(out));
}

IntensitySpectrum IntensitySpectrum::scaled(double s) const {
  ComplexField out = spectrum_;
  for (cplx& c : out.values()) c *= s;
  return IntensitySpectrum(std::move(out));
}

}  // namespace ndphoton
