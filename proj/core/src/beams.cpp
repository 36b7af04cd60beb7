#include "ndphoton/beams.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"
#include "ndphoton/special_functions.hpp"

namespace ndphoton {
namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

template <class F>
ComplexField sample(const GridSpec& grid, Domain domain, F&& value) {
  ComplexField out(grid, domain);
  const std::size_t n = grid.n();
  auto v = out.values();
  parallel_for(0, n, [&](std::size_t r) {
    const double y = grid.coord(domain, r);
    for (std::size_t c = 0; c < n; ++c) {
      const double x = grid.coord(domain, c);
      v[r * n + c] = value(std::hypot(x, y));
    }
  });
  normalize_energy(out);
  return out;
}

}  // namespace

void BGParams::validate() const {
  if (!(w0 > 0.0) || !std::isfinite(w0)) throw DomainError("BG waist w0 must be > 0");
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be > 0");
  }
  if (!(kt >= 0.0) || !(kt < k())) throw DomainError("BG kt must satisfy 0 <= kt < k");
}

AxiconSpec AxiconSpec::from_base_angle(double alpha, double refractive_index) {
  return {std::numbers::pi - 2.0 * alpha, refractive_index};
}

double AxiconSpec::kt(double wavelength) const {
  return 2.0 * std::numbers::pi / wavelength * (refractive_index - 1.0) * base_angle();
}

void AxiconSpec::validate() const {
  if (!(apex_angle > 0.0) || !(apex_angle <= std::numbers::pi)) {
    throw DomainError("axicon apex angle must lie in (0, pi]");
  }
  if (!(refractive_index > 1.0)) throw DomainError("axicon refractive index must be > 1");
}

ComplexField bg_spectrum(const BGParams& p, const GridSpec& grid) {
  p.validate();
  if (grid.k_max() < p.kt + 8.0 / p.w0) {
    throw SamplingError(fmt("bg_spectrum: k_max = %.6g rad/um < kt + 8/w0 = %.6g rad/um",
                            grid.k_max(), p.kt + 8.0 / p.w0));
  }
  if (grid.dk() > 1.0 / p.w0) {
    throw SamplingError(
        fmt("bg_spectrum: dk = %.6g rad/um > (4/w0)/4 = %.6g rad/um", grid.dk(), 1.0 / p.w0));
  }
  const double w2 = p.w0 * p.w0;
  // exp(-w0^2 K^2/4) I0(kt w0^2 K/2) up to the constant exp(w0^2 kt^2/4), which
  // would overflow and is absorbed by the normalization.
  return sample(grid, Domain::Momentum, [&](double kk) {
    const double d = kk - p.kt;
    return cplx{std::exp(-0.25 * w2 * d * d) * bessel_i0_scaled(0.5 * p.kt * w2 * kk), 0.0};
  });
}

ComplexField bg_field(const BGParams& p, double z, const GridSpec& grid) {
  p.validate();
  const cplx mu{1.0, z / p.z_r()};
  if (grid.extent() < 6.0 * p.w0 * std::abs(mu)) {
    throw SamplingError(fmt("bg_field: n dx = %.6g um < 6 w0 |mu| = %.6g um", grid.extent(),
                            6.0 * p.w0 * std::abs(mu)));
  }
  if (p.kt > 0.0 && grid.dx() > 2.0 * std::numbers::pi / p.kt / 8.0) {
    throw SamplingError(fmt("bg_field: dx = %.6g um > (2 pi/kt)/8 = %.6g um", grid.dx(),
                            2.0 * std::numbers::pi / p.kt / 8.0));
  }
  const cplx inv_mu = 1.0 / mu;
  const cplx axial{0.0, p.kt * p.kt * z / (2.0 * p.k())};
  const double w2 = p.w0 * p.w0;
  return sample(grid, Domain::Position, [&](double rho) {
    return inv_mu * std::exp(-inv_mu * (axial + rho * rho / w2)) *
           bessel_j0(p.kt * rho * inv_mu);
  });
}

ComplexField gaussian_field(double w0, double wavelength, double z, const GridSpec& grid) {
  BGParams p{w0, 0.0, wavelength};
  p.validate();
  const cplx mu{1.0, z / p.z_r()};
  const double wz = w0 * std::abs(mu);
  if (grid.extent() < 6.0 * wz) {
    throw SamplingError(
        fmt("gaussian_field: n dx = %.6g um < 6 w(z) = %.6g um", grid.extent(), 6.0 * wz));
  }
  if (grid.dx() > w0 / 2.0) {
    throw SamplingError(fmt("gaussian_field: dx = %.6g um > w0/2 = %.6g um", grid.dx(), w0 / 2.0));
  }
  const cplx inv_mu = 1.0 / mu;
  const double w2 = w0 * w0;
  return sample(grid, Domain::Position,
                [&](double rho) { return inv_mu * std::exp(-inv_mu * (rho * rho / w2)); });
}

ComplexField apply_axicon(const ComplexField& field, const AxiconSpec& ax, double wavelength) {
  if (field.domain() != Domain::Position) {
    throw DomainTagError("apply_axicon expects a position-domain field");
  }
  ax.validate();
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  const double kt = ax.kt(wavelength);
  ComplexField out = field;
  if (kt == 0.0) return out;
  const std::size_t n = out.n();
  auto v = out.values();
  parallel_for(0, n, [&](std::size_t r) {
    const double y = out.coord(r);
    for (std::size_t c = 0; c < n; ++c) {
      const double phase = -kt * std::hypot(out.coord(c), y);
      v[r * n + c] *= cplx{std::cos(phase), std::sin(phase)};
    }
  });
  return out;
}

}  // namespace ndphoton
