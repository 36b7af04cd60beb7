#include "ndphoton/optics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"

namespace ndphoton {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wavenumber(double wavelength) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be > 0");
  }
  return kTwoPi / wavelength;
}

void require_position(const ComplexField& field, const char* op) {
  if (field.domain() != Domain::Position) {
    throw DomainTagError(std::string(op) + " expects a position-domain field");
  }
}

// Multiplies every sample by g(x, y) in the field's own coordinates.
template <class G>
void multiply(ComplexField& field, G&& g) {
  const std::size_t n = field.n();
  auto v = field.values();
  parallel_for(0, n, [&](std::size_t r) {
    const double y = field.coord(r);
    for (std::size_t c = 0; c < n; ++c) v[r * n + c] *= g(field.coord(c), y);
  });
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Describe {
  std::string operator()(const FreeSpace& e) const {
    return "free_space(z = " + format_double(e.z) + " um, " + to_string(e.model) + ")";
  }
  std::string operator()(const ThinLens& e) const {
    return "lens(f = " + format_double(e.f) + " um)";
  }
  std::string operator()(const CircularAperture& e) const {
    return "aperture(radius = " + format_double(e.radius) + " um)";
  }
  std::string operator()(const IdealMagnifier& e) const {
    return "magnifier(m = " + format_double(e.m) + ")";
  }
  std::string operator()(const FourierSystem& e) const {
    return "fourier_system(f = " + format_double(e.f) + " um)";
  }
  std::string operator()(const Axicon& e) const {
    return "axicon(apex = " + format_double(e.spec.apex_angle) + " rad)";
  }
};

void validate_element(const Element& element) {
  std::visit(
      [](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          if (!std::isfinite(e.z)) throw DomainError("free-space distance must be finite");
        } else if constexpr (std::is_same_v<T, ThinLens>) {
          if (e.f == 0.0 || std::isnan(e.f)) throw DomainError("lens focal length must be != 0");
          if (!(e.radius > 0.0)) throw DomainError("lens radius must be > 0");
        } else if constexpr (std::is_same_v<T, CircularAperture>) {
          if (!(e.radius > 0.0)) throw DomainError("aperture radius must be > 0");
        } else if constexpr (std::is_same_v<T, IdealMagnifier>) {
          if (e.m == 0.0 || !std::isfinite(e.m)) {
            throw DomainError("magnification must be finite and != 0");
          }
        } else if constexpr (std::is_same_v<T, FourierSystem>) {
          if (e.f == 0.0 || !std::isfinite(e.f)) {
            throw DomainError("Fourier-system focal length must be finite and != 0");
          }
        } else {
          e.spec.validate();
        }
      },
      element);
}

// Rethrows the active exception with a prefix, keeping its type.
[[noreturn]] void rethrow_with_prefix(const std::string& prefix) {
  try {
    throw;
  } catch (const SamplingError& e) {
    throw SamplingError(prefix + e.what());
  } catch (const DomainTagError& e) {
    throw DomainTagError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const ShiftOverflowError& e) {
    throw ShiftOverflowError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace

const char* to_string(PropagationModel m) {
  return m == PropagationModel::Paraxial ? "paraxial" : "exact";
}

std::string describe(const Element& e) { return std::visit(Describe{}, e); }

void OpticalTrain::validate() const {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("optical train wavelength must be > 0");
  }
  if (stages.empty()) throw DomainError("optical train has no elements");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    try {
      validate_element(stages[i].element);
    } catch (...) {
      rethrow_with_prefix("plane " + std::to_string(i) + ": ");
    }
  }
}

double edge_energy_fraction(const ComplexField& spectrum) {
  if (spectrum.domain() != Domain::Momentum) {
    throw DomainTagError("edge_energy_fraction expects a momentum-domain field");
  }
  const std::size_t n = spectrum.n();
  const auto v = spectrum.values();
  const double limit = 0.9 * spectrum.grid().k_max();
  std::vector<double> edge(n, 0.0);
  std::vector<double> all(n, 0.0);
  parallel_for(0, n, [&](std::size_t r) {
    const bool row_edge = std::abs(spectrum.coord(r)) >= limit;
    for (std::size_t c = 0; c < n; ++c) {
      const double e = std::norm(v[r * n + c]);
      all[r] += e;
      if (row_edge || std::abs(spectrum.coord(c)) >= limit) edge[r] += e;
    }
  });
  double se = 0.0;
  double sa = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    se += edge[r];
    sa += all[r];
  }
  return sa > 0.0 ? se / sa : 0.0;
}

PropagationResult propagate(const ComplexField& field, double z, double wavelength,
                            PropagationModel model) {
  require_position(field, "propagate");
  if (!std::isfinite(z)) throw DomainError("propagation distance must be finite");
  const double k = wavenumber(wavelength);
  if (model == PropagationModel::Exact && field.grid().k_max() >= k) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "propagate (exact): k_max = %.6g rad/um >= k = %.6g rad/um",
                  field.grid().k_max(), k);
    throw SamplingError(buf);
  }
  ComplexField spectrum = to_momentum(field);
  const bool aliasing = edge_energy_fraction(spectrum) > 1e-3;
  if (model == PropagationModel::Paraxial) {
    const double carrier = std::fmod(k * z, kTwoPi);
    const double scale = z / (2.0 * k);
    multiply(spectrum, [&](double kx, double ky) {
      const double phase = carrier - scale * (kx * kx + ky * ky);
      return cplx{std::cos(phase), std::sin(phase)};
    });
  } else {
    const double k2 = k * k;
    multiply(spectrum, [&](double kx, double ky) {
      const double kz2 = k2 - kx * kx - ky * ky;
      if (kz2 <= 0.0) return cplx{};
      const double phase = z * std::sqrt(kz2);
      return cplx{std::cos(phase), std::sin(phase)};
    });
  }
  return {to_position(spectrum), aliasing};
}

ComplexField apply_lens(const ComplexField& field, double f, double wavelength) {
  require_position(field, "apply_lens");
  if (f == 0.0 || std::isnan(f)) throw DomainError("lens focal length must be != 0");
  ComplexField out = field;
  if (std::isinf(f)) return out;
  const double s = -wavenumber(wavelength) / (2.0 * f);
  multiply(out, [&](double x, double y) {
    const double phase = s * (x * x + y * y);
    return cplx{std::cos(phase), std::sin(phase)};
  });
  return out;
}

ComplexField apply_aperture(const ComplexField& field, double radius) {
  require_position(field, "apply_aperture");
  if (!(radius > 0.0)) throw DomainError("aperture radius must be > 0");
  ComplexField out = field;
  if (std::isinf(radius)) return out;
  const double r2 = radius * radius;
  multiply(out, [&](double x, double y) { return x * x + y * y <= r2 ? 1.0 : 0.0; });
  return out;
}

ComplexField magnify(const ComplexField& field, double m) {
  require_position(field, "magnify");
  if (m == 0.0 || !std::isfinite(m)) throw DomainError("magnification must be finite and != 0");
  const double am = std::abs(m);
  ComplexField out =
      field.relabeled(GridSpec::make(field.n(), field.grid().dx() * am), Domain::Position);
  const std::size_t n = out.n();
  auto v = out.values();
  if (m < 0.0) {
    // rho -> -rho: index j maps to (n - j) mod n about the centre sample n/2.
    const auto src = field.values();
    parallel_for(0, n, [&](std::size_t r) {
      const std::size_t rr = (n - r) % n;
      for (std::size_t c = 0; c < n; ++c) v[r * n + c] = src[rr * n + (n - c) % n];
    });
  }
  for (cplx& c : v) c /= am;
  return out;
}

ComplexField fourier_plane_field(const ComplexField& field, double f, double wavelength) {
  require_position(field, "fourier_plane_field");
  if (f == 0.0 || !std::isfinite(f)) throw DomainError("Fourier-system focal length must be != 0");
  const double k = wavenumber(wavelength);
  const double af = std::abs(f);
  ComplexField spectrum = to_momentum(field);
  const GridSpec out_grid = GridSpec::make(field.n(), af * field.grid().dk() / k);
  ComplexField out = std::move(spectrum).relabeled(out_grid, Domain::Position);
  const double s = k / af;
  for (cplx& c : out.values()) c *= s;
  if (f < 0.0) return magnify(out, -1.0);
  return out;
}

ComplexField apply_element(const ComplexField& field, const Element& element, double wavelength,
                           bool* aliasing) {
  return std::visit(
      [&](const auto& e) -> ComplexField {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          auto res = propagate(field, e.z, wavelength, e.model);
          if (aliasing && res.aliasing_risk) *aliasing = true;
          return std::move(res.field);
        } else if constexpr (std::is_same_v<T, ThinLens>) {
          return apply_lens(apply_aperture(field, e.radius), e.f, wavelength);
        } else if constexpr (std::is_same_v<T, CircularAperture>) {
          return apply_aperture(field, e.radius);
        } else if constexpr (std::is_same_v<T, IdealMagnifier>) {
          return magnify(field, e.m);
        } else if constexpr (std::is_same_v<T, FourierSystem>) {
          return fourier_plane_field(field, e.f, wavelength);
        } else {
          return apply_axicon(field, e.spec, wavelength);
        }
      },
      element);
}

TrainResult run_train(const ComplexField& field, const OpticalTrain& train) {
  train.validate();
  require_position(field, "run_train");
  TrainResult result{field, {}, {}};
  for (std::size_t i = 0; i < train.stages.size(); ++i) {
    const Stage& stage = train.stages[i];
    bool aliasing = false;
    try {
      result.output = apply_element(result.output, stage.element, train.wavelength, &aliasing);
    } catch (const Error&) {
      rethrow_with_prefix("plane " + std::to_string(i) + " (" + describe(stage.element) + "): ");
    }
    if (aliasing) {
      result.warnings.push_back("plane " + std::to_string(i) + " (" + describe(stage.element) +
                                "): aliasing risk, >0.1% of energy near k_max");
    }
    if (!stage.tap.empty()) result.taps.emplace_back(stage.tap, result.output);
  }
  return result;
}

RayMatrix RayMatrix::then(const RayMatrix& next) const {
  return {next.a * a + next.b * c, next.a * b + next.b * d, next.c * a + next.d * c,
          next.c * b + next.d * d};
}

std::optional<RayMatrix> ray_matrix(const Element& element) {
  return std::visit(
      [](const auto& e) -> std::optional<RayMatrix> {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          if (e.model != PropagationModel::Paraxial) return std::nullopt;
          return RayMatrix{1.0, e.z, 0.0, 1.0};
        } else if constexpr (std::is_same_v<T, ThinLens>) {
          if (!std::isinf(e.radius)) return std::nullopt;
          return RayMatrix{1.0, 0.0, std::isinf(e.f) ? 0.0 : -1.0 / e.f, 1.0};
        } else if constexpr (std::is_same_v<T, IdealMagnifier>) {
          return RayMatrix{e.m, 0.0, 0.0, 1.0 / e.m};
        } else if constexpr (std::is_same_v<T, FourierSystem>) {
          return RayMatrix{0.0, e.f, -1.0 / e.f, 0.0};
        } else {
          return std::nullopt;
        }
      },
      element);
}

std::optional<RayMatrix> ray_matrix(const OpticalTrain& train) {
  RayMatrix m;
  for (const Stage& s : train.stages) {
    auto next = ray_matrix(s.element);
    if (!next) return std::nullopt;
    m = m.then(*next);
  }
  return m;
}

}  // namespace ndphoton
