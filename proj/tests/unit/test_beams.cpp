#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ndphoton/analysis.hpp"
#include "ndphoton/beams.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/optics.hpp"
#include "oracles.hpp"

using namespace ndphoton;

namespace {

const GridSpec kLabGrid = make_grid(1024, 12.0);

// |v|^2 along the central row, columns [n/2, n).
std::vector<double> half_row(const ComplexField& f) {
  std::vector<double> out;
  const std::size_t n = f.n();
  for (std::size_t c = n / 2; c < n; ++c) out.push_back(std::norm(f.at(n / 2, c)));
  return out;
}

Profile central_row(const ComplexField& f) {
  Profile p;
  p.domain = f.domain();
  for (std::size_t c = 0; c < f.n(); ++c) {
    p.coords.push_back(f.coord(c));
    p.values.push_back(std::norm(f.at(f.n() / 2, c)));
  }
  return p;
}

// Second-moment beam radius 2 sqrt(<x^2>) of the intensity.
double moment_radius(const ComplexField& f) {
  double s = 0.0;
  double sx = 0.0;
  for (std::size_t r = 0; r < f.n(); ++r)
    for (std::size_t c = 0; c < f.n(); ++c) {
      const double i = std::norm(f.at(r, c));
      s += i;
      sx += i * f.coord(c) * f.coord(c);
    }
  return 2.0 * std::sqrt(sx / s);
}

void expect_symmetric(const ComplexField& f, double tol) {
  const std::size_t n = f.n();
  double peak = 0.0;
  for (const auto& v : f.values()) peak = std::max(peak, std::norm(v));
  for (std::size_t r = 1; r < n; r += 7)
    for (std::size_t c = 1; c < n; c += 5) {
      const double i = std::norm(f.at(r, c));
      EXPECT_NEAR(i, std::norm(f.at(n - r, n - c)), tol * peak);
      EXPECT_NEAR(i, std::norm(f.at(c, r)), tol * peak);
    }
}

}  // namespace

TEST(BGParamsTest, DerivedQuantities) {
  const BGParams p;
  EXPECT_DOUBLE_EQ(p.z_r(), p.k() * p.w0 * p.w0 / 2.0);
  EXPECT_THROW((BGParams{-1.0, 0.046, 0.406}.validate()), DomainError);
  EXPECT_THROW((BGParams{1850.0, 100.0, 0.406}.validate()), DomainError);
  EXPECT_THROW((BGParams{1850.0, 0.046, 0.0}.validate()), DomainError);
}

TEST(BGSpectrum, LabAnnulusArgmax) {
  const ComplexField s = bg_spectrum(BGParams{}, kLabGrid);
  EXPECT_NEAR(energy(s), 1.0, 1e-12);
  const auto row = half_row(s);
  const auto it = std::max_element(row.begin(), row.end());
  const double k_peak = static_cast<double>(it - row.begin()) * kLabGrid.dk();
  EXPECT_NEAR(k_peak, 0.046, kLabGrid.dk());
}

TEST(BGSpectrum, AnnulusWidth) {
  const BGParams p;
  const ComplexField s = bg_spectrum(p, kLabGrid);
  const auto fit = annulus_fit(RealMap::on_grid(kLabGrid, Domain::Momentum, intensity(s)));
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->delta_k, 4.0 / p.w0, 0.03 * 4.0 / p.w0);
  EXPECT_NEAR(fit->kt_fit, 0.046, 0.02 * 0.046);
}

TEST(BGSpectrum, ZeroKtIsGaussian) {
  const GridSpec g = make_grid(256, 10.0);
  const double w0 = 300.0;
  const ComplexField s = bg_spectrum(BGParams{w0, 0.0, 0.406}, g);
  const cplx c = s.at(128, 128);
  for (std::size_t j = 128; j < 256; j += 3) {
    const double k = g.k(j);
    EXPECT_NEAR(std::abs(s.at(128, j) / c), std::exp(-w0 * w0 * k * k / 4.0), 1e-12);
  }
}

TEST(BGSpectrum, SamplingViolations) {
  EXPECT_THROW(bg_spectrum(BGParams{}, make_grid(1024, 80.0)), SamplingError);
  EXPECT_THROW(bg_spectrum(BGParams{}, make_grid(256, 12.0)), SamplingError);
  try {
    bg_spectrum(BGParams{}, make_grid(256, 12.0));
  } catch (const SamplingError& e) {
    EXPECT_NE(std::string(e.what()).find("dk"), std::string::npos);
  }
}

TEST(BGField, FirstZeroOfCentralLobe) {
  const GridSpec g = make_grid(1024, 2.0);
  const ComplexField f = bg_field(BGParams{200.0, 0.046, 0.406}, 0.0, g);
  EXPECT_NEAR(energy(f), 1.0, 1e-12);
  const cplx c = f.at(512, 512);
  double zero = 0.0;
  for (std::size_t j = 513; j < 1024; ++j) {
    const double a = std::real(f.at(512, j - 1) / c);
    const double b = std::real(f.at(512, j) / c);
    if (a > 0.0 && b <= 0.0) {
      zero = g.x(j - 1) + g.dx() * a / (a - b);
      break;
    }
  }
  const double root = oracle::bisect([](double x) { return oracle::j0(x); }, 2.0, 3.0);
  EXPECT_NEAR(zero, root / 0.046, 0.05);
  EXPECT_NEAR(zero, 52.28, 0.01);
}

TEST(BGField, ZeroKtIsGaussian) {
  const GridSpec g = make_grid(256, 5.0);
  const double w0 = 150.0;
  const ComplexField f = bg_field(BGParams{w0, 0.0, 0.406}, 0.0, g);
  const cplx c = f.at(128, 128);
  for (std::size_t j = 128; j < 256; j += 5) {
    const double x = g.x(j);
    EXPECT_NEAR(std::abs(f.at(128, j) / c), std::exp(-x * x / (w0 * w0)), 1e-12);
  }
}

TEST(BGField, GaussianPeakHalvesAtRayleighRange) {
  const GridSpec g = make_grid(512, 6.0);
  const BGParams p{100.0, 0.0, 0.812};
  const ComplexField f0 = bg_field(p, 0.0, g);
  const ComplexField f1 = bg_field(p, p.z_r(), g);
  EXPECT_NEAR(std::norm(f1.at(256, 256)) / std::norm(f0.at(256, 256)), 0.5, 1e-10);
  const ComplexField prop = propagate(f0, p.z_r(), p.wavelength).field;
  EXPECT_LT(phase_aligned_l2(f1, prop), 1e-9);
}

TEST(BGField, FourierPairWithSpectrum) {
  const BGParams p;
  const GridSpec g = make_grid(1024, 16.0);
  const ComplexField f = bg_field(p, 0.0, g);
  const ComplexField s = bg_spectrum(p, g);
  EXPECT_LT(phase_aligned_l2(s, to_momentum(f)), 1e-6);
}

TEST(BGField, MatchesPropagatedSpectrum) {
  const BGParams p;
  const ComplexField near = to_position(bg_spectrum(p, kLabGrid));
  for (double z : {1e5, 2.5e5}) {
    const ComplexField ref = bg_field(p, z, kLabGrid);
    EXPECT_LT(phase_aligned_l2(ref, propagate(near, z, p.wavelength).field), 1e-3) << "z=" << z;
  }
}

TEST(BGField, NegativeDistanceIsConjugateMirror) {
  const GridSpec g = make_grid(512, 6.0);
  const BGParams p{200.0, 0.05, 0.406};
  const ComplexField a = bg_field(p, 3e5, g);
  const ComplexField b = bg_field(p, -3e5, g);
  for (std::size_t i = 0; i < g.size(); i += 17)
    EXPECT_NEAR(std::abs(a.values()[i]), std::abs(b.values()[i]), 1e-12);
}

TEST(BGField, SamplingViolations) {
  EXPECT_THROW(bg_field(BGParams{}, 0.0, make_grid(512, 12.0)), SamplingError);
  EXPECT_THROW(bg_field(BGParams{200.0, 0.046, 0.406}, 0.0, make_grid(128, 20.0)), SamplingError);
}

TEST(Beams, RadialSymmetry) {
  const BGParams p;
  expect_symmetric(bg_spectrum(p, kLabGrid), 1e-10);
  expect_symmetric(bg_field(p, 0.0, kLabGrid), 1e-10);
  expect_symmetric(bg_field(p, 2e5, kLabGrid), 1e-10);
  expect_symmetric(gaussian_field(100.0, 0.812, 1e4, make_grid(256, 5.0)), 1e-10);
}

TEST(Gaussian, FwhmAtWaist) {
  const GridSpec g = make_grid(512, 2.0);
  const double w0 = 100.0;
  const ComplexField f = gaussian_field(w0, 0.812, 0.0, g);
  EXPECT_NEAR(energy(f), 1.0, 1e-12);
  for (const auto& v : f.values()) {
    EXPECT_GT(v.real(), 0.0);
    EXPECT_EQ(v.imag(), 0.0);
  }
  EXPECT_NEAR(fwhm(central_row(f)), 1.17741 * w0, 2e-3 * w0);
}

TEST(Gaussian, WidthGrowsBySqrt2AtRayleighRange) {
  const GridSpec g = make_grid(512, 5.0);
  const double w0 = 100.0;
  const double k = 2.0 * std::numbers::pi / 0.812;
  const double zr = k * w0 * w0 / 2.0;
  const double r0 = moment_radius(gaussian_field(w0, 0.812, 0.0, g));
  const double r1 = moment_radius(gaussian_field(w0, 0.812, zr, g));
  EXPECT_NEAR(r0, w0, 1e-6 * w0);
  EXPECT_NEAR(r1 / r0, std::sqrt(2.0), 1e-6);
}

TEST(Gaussian, SamplingViolations) {
  const GridSpec g = make_grid(256, 5.0);
  EXPECT_THROW(gaussian_field(g.extent() / 2.0, 0.812, 0.0, g), SamplingError);
  EXPECT_THROW(gaussian_field(8.0, 0.812, 0.0, g), SamplingError);
}

TEST(AxiconTest, AngleConventions) {
  const AxiconSpec a = AxiconSpec::from_base_angle(0.01, 1.46);
  EXPECT_NEAR(a.base_angle(), 0.01, 1e-15);
  EXPECT_NEAR(a.kt(0.406), 2.0 * std::numbers::pi / 0.406 * 0.46 * 0.01, 1e-15);
  EXPECT_THROW((AxiconSpec{0.0, 1.46}.validate()), DomainError);
  EXPECT_THROW((AxiconSpec{1.0, 1.0}.validate()), DomainError);
  EXPECT_NO_THROW((AxiconSpec{std::numbers::pi, 1.46}.validate()));
}

TEST(AxiconTest, FlatAxiconIsIdentity) {
  const GridSpec g = make_grid(128, 10.0);
  const ComplexField f = gaussian_field(200.0, 0.406, 0.0, g);
  const ComplexField out = apply_axicon(f, AxiconSpec{std::numbers::pi, 1.46}, 0.406);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(out.values()[i], f.values()[i]);
}

TEST(AxiconTest, ProducesAnnulusAtPredictedKt) {
  const double lambda = 0.406;
  const double kt_target = 0.05;
  const double k = 2.0 * std::numbers::pi / lambda;
  const AxiconSpec ax = AxiconSpec::from_base_angle(kt_target / (k * 0.46), 1.46);
  const ComplexField f = gaussian_field(2000.0, lambda, 0.0, kLabGrid);
  const ComplexField out = apply_axicon(f, ax, lambda);
  EXPECT_NEAR(energy(out), energy(f), 1e-12);
  const auto fit =
      annulus_fit(RealMap::on_grid(kLabGrid, Domain::Momentum, intensity(to_momentum(out))));
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->kt_fit, ax.kt(lambda), 0.01 * ax.kt(lambda));
}
