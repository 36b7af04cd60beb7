#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndphoton/analysis.hpp"
#include "ndphoton/beams.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/optics.hpp"

using namespace ndphoton;

namespace {

ComplexField random_smooth(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g, Domain::Position);
  for (int b = 0; b < 5; ++b) {
    const double cx = nd(rng) * g.extent() / 12.0;
    const double cy = nd(rng) * g.extent() / 12.0;
    const double w = g.extent() / 14.0 * (1.0 + 0.5 * std::abs(nd(rng)));
    const cplx a{nd(rng), nd(rng)};
    const double kx = nd(rng) * g.k_max() / 10.0;
    for (std::size_t r = 0; r < g.n(); ++r)
      for (std::size_t c = 0; c < g.n(); ++c) {
        const double x = g.x(c) - cx;
        const double y = g.x(r) - cy;
        f.at(r, c) += a * std::exp(-(x * x + y * y) / (w * w)) * std::polar(1.0, kx * x);
      }
  }
  normalize_energy(f);
  return f;
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

RealMap intensity_map(const ComplexField& f) {
  return RealMap::on_grid(f.grid(), f.domain(), intensity(f));
}

}  // namespace

TEST(Propagate, PlaneWaveKeepsMagnitude) {
  const GridSpec g = make_grid(64, 2.0);
  const ComplexField f(g, Domain::Position, std::vector<cplx>(g.size(), cplx{1.0, 0.0}));
  for (double z : {0.0, 123.4, -5e4}) {
    const ComplexField out = propagate(f, z, 0.812).field;
    const cplx ref = out.at(0, 0);
    EXPECT_NEAR(std::abs(ref), 1.0, 1e-12);
    for (const auto& v : out.values()) EXPECT_NEAR(std::abs(v - ref), 0.0, 1e-12);
  }
}

TEST(Propagate, GaussianFwhmGrowsBySqrt2) {
  const double w0 = 100.0;
  const double lambda = 0.812;
  const double zr = 2.0 * std::numbers::pi / lambda * w0 * w0 / 2.0;
  EXPECT_NEAR(zr, 38684.0, 10.0);
  const GridSpec g = make_grid(512, 4.0);
  const ComplexField f = gaussian_field(w0, lambda, 0.0, g);
  const double w_start = fwhm(central_row(f));
  const double w_end = fwhm(central_row(propagate(f, zr, lambda).field));
  EXPECT_NEAR(w_end / w_start, std::sqrt(2.0), 2e-3);
  EXPECT_NEAR(moment_radius(propagate(f, zr, lambda).field) / moment_radius(f), std::sqrt(2.0),
              1e-9);
}

TEST(Propagate, MatchesClosedFormGaussian) {
  const GridSpec g = make_grid(256, 8.0);
  const ComplexField f = gaussian_field(120.0, 0.406, 0.0, g);
  for (double z : {-3e4, 1e4, 8e4}) {
    EXPECT_LT(phase_aligned_l2(gaussian_field(120.0, 0.406, z, g), propagate(f, z, 0.406).field),
              1e-9);
  }
}

TEST(Propagate, SemigroupAndReversibility) {
  const GridSpec g = make_grid(128, 4.0);
  const ComplexField u = random_smooth(g, 7);
  for (auto model : {PropagationModel::Paraxial, PropagationModel::Exact}) {
    const ComplexField a = propagate(propagate(u, 3000.0, 0.8, model).field, 4500.0, 0.8, model).field;
    const ComplexField b = propagate(u, 7500.0, 0.8, model).field;
    EXPECT_LT(phase_aligned_l2(a, b), 1e-10);
    const ComplexField back = propagate(b, -7500.0, 0.8, model).field;
    EXPECT_LT(phase_aligned_l2(u, back), 1e-10);
  }
}

TEST(Propagate, EnergyConserved) {
  const GridSpec g = make_grid(128, 4.0);
  const ComplexField u = random_smooth(g, 3);
  for (double z : {1e3, 1e5, -2e4}) {
    EXPECT_NEAR(energy(propagate(u, z, 0.5).field), energy(u), 1e-9 * energy(u));
  }
}

TEST(Propagate, ExactModelRequiresResolvedGrid) {
  const GridSpec g = make_grid(16, 0.1);
  const ComplexField u(g, Domain::Position, std::vector<cplx>(g.size(), cplx{1.0, 0.0}));
  EXPECT_THROW(propagate(u, 10.0, 0.8, PropagationModel::Exact), SamplingError);
  EXPECT_NO_THROW(propagate(u, 10.0, 0.8, PropagationModel::Paraxial));
}

TEST(Propagate, AliasingFlag) {
  const GridSpec g = make_grid(64, 1.0);
  ComplexField u(g, Domain::Position);
  u.at(32, 32) = 1.0;  // delta: flat spectrum up to k_max
  EXPECT_TRUE(propagate(u, 10.0, 0.8).aliasing_risk);
  const ComplexField smooth = gaussian_field(10.0, 0.8, 0.0, g);
  EXPECT_FALSE(propagate(smooth, 10.0, 0.8).aliasing_risk);
  EXPECT_THROW(propagate(to_momentum(smooth), 1.0, 0.8), DomainTagError);
}

TEST(Lens, InfiniteFocalLengthAndConjugatePair) {
  const GridSpec g = make_grid(128, 4.0);
  const ComplexField u = random_smooth(g, 11);
  const ComplexField same = apply_lens(u, std::numeric_limits<double>::infinity(), 0.8);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(same.values()[i], u.values()[i]);
  const ComplexField back = apply_lens(apply_lens(u, 1e5, 0.8), -1e5, 0.8);
  EXPECT_LT(relative_l2(u.values(), back.values()), 1e-12);
  EXPECT_NEAR(energy(apply_lens(u, 3e4, 0.8)), energy(u), 1e-12);
}

TEST(Lens, CollimatedGaussianFocusesNearF) {
  const double f = 1e5;
  const double lambda = 0.812;
  const GridSpec g = make_grid(1024, 4.0);
  const ComplexField lensed = apply_lens(gaussian_field(500.0, lambda, 0.0, g), f, lambda);
  double best_z = 0.0;
  double best_w = std::numeric_limits<double>::infinity();
  for (double z = 8e4; z <= 1.2e5 + 1.0; z += 2e3) {
    const double w = fwhm(central_row(propagate(lensed, z, lambda).field));
    if (w < best_w) {
      best_w = w;
      best_z = z;
    }
  }
  EXPECT_NEAR(best_z, f, 2e3);
  const double k = 2.0 * std::numbers::pi / lambda;
  EXPECT_NEAR(best_w, 1.17741 * 2.0 * f / (k * 500.0), 0.02 * best_w);
}

TEST(Aperture, ZeroesOutsideRadius) {
  const GridSpec g = make_grid(64, 1.0);
  const ComplexField u(g, Domain::Position, std::vector<cplx>(g.size(), cplx{1.0, 0.0}));
  const ComplexField out = apply_aperture(u, 10.0);
  EXPECT_EQ(out.at(32, 32), cplx(1.0, 0.0));
  EXPECT_EQ(out.at(32, 32 + 11), cplx(0.0, 0.0));
  EXPECT_EQ(out.at(32, 32 + 10), cplx(1.0, 0.0));
  EXPECT_LT(energy(out), energy(u));
}

TEST(FourierPlane, PumpRingRadius) {
  const GridSpec g = make_grid(1024, 12.0);
  const BGParams p;
  const ComplexField near = to_position(bg_spectrum(p, g));
  const ComplexField fp = fourier_plane_field(near, 1e5, 0.406);
  const double expected = 1e5 * 0.046 / p.k();
  EXPECT_NEAR(expected, 297.2, 0.05);
  EXPECT_NEAR(fp.pitch(), 1e5 * g.dk() / p.k(), 1e-12);
  const auto fit = annulus_fit(intensity_map(fp));
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->kt_fit, expected, fp.pitch());
  EXPECT_NEAR(energy(fp), 1.0, 1e-12);
}

TEST(FourierPlane, IdlerWavelengthRingRadius) {
  const GridSpec g = make_grid(1024, 12.0);
  const ComplexField near = to_position(bg_spectrum(BGParams{1850.0, 0.046, 0.812}, g));
  const ComplexField fp = fourier_plane_field(near, 1e5, 0.812);
  const double expected = 1e5 * 0.046 / (2.0 * std::numbers::pi / 0.812);
  EXPECT_NEAR(expected, 594.5, 0.05);
  const auto fit = annulus_fit(intensity_map(fp));
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->kt_fit, expected, fp.pitch());
}

TEST(FourierPlane, GaussianWaist) {
  const GridSpec g = make_grid(1024, 12.0);
  const double lambda = 0.406;
  const double k = 2.0 * std::numbers::pi / lambda;
  const ComplexField fp = fourier_plane_field(gaussian_field(1850.0, lambda, 0.0, g), 1e5, lambda);
  const double expected = 2.0 * 1e5 / (k * 1850.0);
  EXPECT_NEAR(expected, 6.99, 0.01);
  EXPECT_NEAR(moment_radius(fp), expected, 1e-3 * expected);
}

TEST(FourierPlane, SamplesAreRelabeledSpectrum) {
  const GridSpec g = make_grid(64, 3.0);
  const ComplexField u = random_smooth(g, 5);
  const double f = 2e4;
  const double k = 2.0 * std::numbers::pi / 0.6;
  const ComplexField fp = fourier_plane_field(u, f, 0.6);
  const ComplexField spec = to_momentum(u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::norm(fp.values()[i]), std::norm(spec.values()[i]) * (k / f) * (k / f),
                1e-14 * (k / f) * (k / f));
  }
  EXPECT_EQ(fp.domain(), Domain::Position);
}

TEST(Train, CascadedFourierSystemsMatchMagnifier) {
  const GridSpec g = make_grid(128, 8.0);
  const ComplexField u = random_smooth(g, 21);
  OpticalTrain train{0.812, {{FourierSystem{1e5}, ""}, {FourierSystem{3e5}, ""}}};
  const TrainResult r = run_train(u, train);
  const ComplexField ref = magnify(u, -3.0);
  EXPECT_NEAR(r.output.pitch(), 3.0 * g.dx(), 1e-12 * g.dx());
  EXPECT_LT(relative_l2(ref.values(), r.output.values()), 1e-8);
  EXPECT_NEAR(energy(r.output), energy(u), 1e-9);
}

TEST(Train, MagnifierInvertsAndRescales) {
  const GridSpec g = make_grid(16, 1.0);
  ComplexField u(g, Domain::Position);
  u.at(8, 11) = 2.0;  // at x = 3
  const ComplexField m = magnify(u, -2.0);
  EXPECT_DOUBLE_EQ(m.pitch(), 2.0);
  EXPECT_EQ(m.at(8, 5), cplx(1.0, 0.0));  // x = -6
  EXPECT_NEAR(energy(m), energy(u), 1e-12);
}

TEST(Train, TapsAndEmptyAperture) {
  const GridSpec g = make_grid(64, 2.0);
  const ComplexField u = random_smooth(g, 2);
  OpticalTrain train{0.8, {{CircularAperture{1e9}, "A"}}};
  const TrainResult r = run_train(u, train);
  ASSERT_EQ(r.taps.size(), 1u);
  EXPECT_EQ(r.taps[0].first, "A");
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r.output.values()[i], u.values()[i]);
}

TEST(Train, ErrorCarriesPlaneIndex) {
  const GridSpec g = make_grid(16, 0.1);
  const ComplexField u(g, Domain::Position, std::vector<cplx>(g.size(), cplx{1.0, 0.0}));
  OpticalTrain train{0.8, {{FreeSpace{1.0}, ""}, {FreeSpace{1.0, PropagationModel::Exact}, ""}}};
  try {
    run_train(u, train);
    FAIL() << "expected SamplingError";
  } catch (const SamplingError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("plane 1", 0), 0u) << e.what();
  }
}

TEST(Train, Validation) {
  EXPECT_THROW((OpticalTrain{0.8, {}}.validate()), DomainError);
  EXPECT_THROW((OpticalTrain{0.0, {{FreeSpace{1.0}, ""}}}.validate()), DomainError);
  EXPECT_THROW((OpticalTrain{0.8, {{ThinLens{0.0}, ""}}}.validate()), DomainError);
  EXPECT_THROW((OpticalTrain{0.8, {{CircularAperture{0.0}, ""}}}.validate()), DomainError);
  EXPECT_THROW((OpticalTrain{0.8, {{IdealMagnifier{0.0}, ""}}}.validate()), DomainError);
}

TEST(RayMatrices, Elements) {
  const auto fs = ray_matrix(Element{FreeSpace{5.0}});
  ASSERT_TRUE(fs);
  EXPECT_EQ(fs->b, 5.0);
  const auto lens = ray_matrix(Element{ThinLens{4.0}});
  ASSERT_TRUE(lens);
  EXPECT_EQ(lens->c, -0.25);
  EXPECT_FALSE(ray_matrix(Element{CircularAperture{1.0}}));
  EXPECT_FALSE(ray_matrix(Element{ThinLens{4.0, 10.0}}));
  EXPECT_FALSE(ray_matrix(Element{FreeSpace{1.0, PropagationModel::Exact}}));

  OpticalTrain train{0.8, {{FourierSystem{1e5}, ""}, {FourierSystem{3e5}, ""}, {FreeSpace{2e4}, ""}}};
  const auto m = ray_matrix(train);
  ASSERT_TRUE(m);
  EXPECT_NEAR(m->a, -3.0, 1e-12);
  EXPECT_NEAR(m->b, -2e4 / 3.0, 1e-6);
  EXPECT_NEAR(m->d, -1.0 / 3.0, 1e-12);
}

TEST(RayMatrices, FourierSystemIsLensBetweenFreeSpaces) {
  const double f = 7e4;
  const RayMatrix direct = *ray_matrix(Element{FourierSystem{f}});
  const RayMatrix composed = ray_matrix(Element{FreeSpace{f}})
                                 ->then(*ray_matrix(Element{ThinLens{f}}))
                                 .then(*ray_matrix(Element{FreeSpace{f}}));
  EXPECT_NEAR(direct.a, composed.a, 1e-12);
  EXPECT_NEAR(direct.b, composed.b, 1e-9);
  EXPECT_NEAR(direct.c, composed.c, 1e-18);
  EXPECT_NEAR(direct.d, composed.d, 1e-12);
}
