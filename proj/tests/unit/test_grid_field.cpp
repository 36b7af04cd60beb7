#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndphoton/error.hpp"
#include "ndphoton/field.hpp"
#include "ndphoton/parallel.hpp"
#include "oracles.hpp"

using namespace ndphoton;

namespace {

ComplexField random_smooth(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g, Domain::Position);
  // a handful of random Gaussian blobs with random phases
  for (int b = 0; b < 6; ++b) {
    const double cx = nd(rng) * g.extent() / 10.0;
    const double cy = nd(rng) * g.extent() / 10.0;
    const double w = g.extent() / 16.0 * (1.0 + std::abs(nd(rng)));
    const cplx a{nd(rng), nd(rng)};
    const double kx = nd(rng) * g.k_max() / 8.0;
    for (std::size_t r = 0; r < g.n(); ++r) {
      for (std::size_t c = 0; c < g.n(); ++c) {
        const double x = g.x(c) - cx;
        const double y = g.x(r) - cy;
        f.at(r, c) += a * std::exp(-(x * x + y * y) / (w * w)) * std::polar(1.0, kx * x);
      }
    }
  }
  return f;
}

}  // namespace

TEST(Grid, PitchRelations) {
  const GridSpec g = make_grid(1024, 10.0);
  EXPECT_NEAR(g.dk(), 2.0 * std::numbers::pi / 10240.0, 1e-18);
  EXPECT_NEAR(g.dk(), 6.1359e-4, 1e-8);
  const double ulp_2pi = std::nextafter(2.0 * std::numbers::pi, 8.0) - 2.0 * std::numbers::pi;
  EXPECT_LE(std::abs(g.dk() * g.dx() * 1024.0 - 2.0 * std::numbers::pi), 4 * ulp_2pi);
  EXPECT_DOUBLE_EQ(make_grid(16, 1.0).k_max(), std::numbers::pi);
}

TEST(Grid, CenteredCoordinates) {
  const GridSpec g = make_grid(16, 2.0);
  EXPECT_EQ(g.x(8), 0.0);
  EXPECT_EQ(g.k(8), 0.0);
  EXPECT_EQ(g.x(0), -16.0);
  EXPECT_EQ(g.x(15), 14.0);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(make_grid(100, 1.0), DomainError);
  EXPECT_THROW(make_grid(8, 1.0), DomainError);
  EXPECT_THROW(make_grid(64, 0.0), DomainError);
  EXPECT_THROW(make_grid(64, -1.0), DomainError);
  EXPECT_NO_THROW(make_grid(16, 1.0));
}

TEST(ComplexFieldTest, RejectsNonFiniteAndWrongSize) {
  const GridSpec g = make_grid(16, 1.0);
  std::vector<cplx> v(256, cplx{1.0, 0.0});
  v[3] = cplx{std::nan(""), 0.0};
  EXPECT_THROW(ComplexField(g, Domain::Position, v), DomainError);
  EXPECT_THROW(ComplexField(g, Domain::Position, std::vector<cplx>(255)), DomainError);
}

TEST(Energy, ConstantFieldAndZero) {
  const GridSpec g = make_grid(16, 1.0);
  ComplexField f(g, Domain::Position, std::vector<cplx>(256, cplx{1.0, 0.0}));
  EXPECT_DOUBLE_EQ(energy(f), 256.0);
  EXPECT_NEAR(energy(to_momentum(f)), 256.0, 256.0 * 1e-12);
  EXPECT_EQ(energy(ComplexField(g, Domain::Position)), 0.0);
}

TEST(Transform, ConstantMapsToCentralDelta) {
  const GridSpec g = make_grid(16, 1.0);
  ComplexField f(g, Domain::Position, std::vector<cplx>(256, cplx{1.0, 0.0}));
  const ComplexField m = to_momentum(f);
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) {
      if (r == 8 && c == 8) {
        EXPECT_GT(std::abs(m.at(r, c)), 1.0);
      } else {
        EXPECT_LT(std::abs(m.at(r, c)), 1e-13);
      }
    }
  }
}

TEST(Transform, MatchesDirectDft) {
  const GridSpec g = make_grid(16, 1.5);
  const ComplexField f = random_smooth(g, 7);
  const auto ref = oracle::direct_centered_dft({f.values().begin(), f.values().end()}, 16, 1.5);
  const ComplexField m = to_momentum(f);
  EXPECT_LT(relative_l2(std::span<const cplx>(ref), m.values()), 1e-13);
}

TEST(Transform, GaussianPairWidth) {
  // exp(-rho^2/w0^2) <-> (w0^2/2) exp(-w0^2 K^2/4)
  const double w0 = 100.0;
  const GridSpec g = make_grid(256, 8.0);
  ComplexField f(g, Domain::Position);
  for (std::size_t r = 0; r < g.n(); ++r) {
    for (std::size_t c = 0; c < g.n(); ++c) {
      f.at(r, c) = std::exp(-(g.x(r) * g.x(r) + g.x(c) * g.x(c)) / (w0 * w0));
    }
  }
  const ComplexField m = to_momentum(f);
  double worst = 0.0;
  for (std::size_t r = 0; r < g.n(); ++r) {
    for (std::size_t c = 0; c < g.n(); ++c) {
      const double k2 = g.k(r) * g.k(r) + g.k(c) * g.k(c);
      const double expect = 0.5 * w0 * w0 * std::exp(-w0 * w0 * k2 / 4.0);
      worst = std::max(worst, std::abs(m.at(r, c) - expect));
    }
  }
  EXPECT_LT(worst, 1e-9 * 0.5 * w0 * w0);
  // 1/e point of the amplitude sits at K = 2/w0
  const std::size_t j = 128 + static_cast<std::size_t>(std::lround(2.0 / w0 / g.dk()));
  const double ratio = std::abs(m.at(128, j)) / std::abs(m.at(128, 128));
  EXPECT_NEAR(ratio, std::exp(-w0 * w0 * g.k(j) * g.k(j) / 4.0), 1e-12);
}

TEST(Transform, RoundTripAndParseval) {
  const GridSpec g = make_grid(128, 3.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    const ComplexField f = random_smooth(g, seed);
    const ComplexField m = to_momentum(f);
    EXPECT_LT(std::abs(energy(m) - energy(f)) / energy(f), 1e-12);
    const ComplexField back = to_position(m);
    EXPECT_LT(relative_l2(f.values(), back.values()), 1e-12);
  }
}

TEST(Transform, Linearity) {
  const GridSpec g = make_grid(64, 2.0);
  const ComplexField f = random_smooth(g, 11);
  const ComplexField h = random_smooth(g, 12);
  const cplx a{0.3, -1.2};
  const cplx b{2.0, 0.5};
  ComplexField combo(g, Domain::Position);
  for (std::size_t i = 0; i < g.size(); ++i) combo.values()[i] = a * f.values()[i] + b * h.values()[i];
  const ComplexField lhs = to_momentum(combo);
  const ComplexField mf = to_momentum(f);
  const ComplexField mh = to_momentum(h);
  std::vector<cplx> rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = a * mf.values()[i] + b * mh.values()[i];
  EXPECT_LT(relative_l2(std::span<const cplx>(rhs), lhs.values()), 1e-12);
}

TEST(Transform, DomainTagMismatch) {
  const GridSpec g = make_grid(16, 1.0);
  ComplexField p(g, Domain::Position);
  ComplexField m(g, Domain::Momentum);
  EXPECT_THROW(to_position(p), DomainTagError);
  EXPECT_THROW(to_momentum(m), DomainTagError);
}

TEST(Energy, IndependentOfThreadCount) {
  const GridSpec g = make_grid(256, 1.0);
  const ComplexField f = random_smooth(g, 5);
  set_thread_count(1);
  const double e1 = energy(f);
  const ComplexField m1 = to_momentum(f);
  set_thread_count(4);
  const double e4 = energy(f);
  const ComplexField m4 = to_momentum(f);
  set_thread_count(0);
  EXPECT_EQ(e1, e4);
  EXPECT_TRUE(std::equal(m1.values().begin(), m1.values().end(), m4.values().begin()));
}

TEST(RealMapTest, CropKeepsWindow) {
  const GridSpec g = make_grid(16, 1.0);
  std::vector<double> v(256);
  for (std::size_t i = 0; i < 256; ++i) v[i] = static_cast<double>(i);
  const RealMap m = RealMap::on_grid(g, Domain::Position, v);
  const RealMap c = m.crop({0.0, 0.0}, 2.0);
  EXPECT_EQ(c.nx, 5u);
  EXPECT_EQ(c.ny, 5u);
  EXPECT_EQ(c.x0, -2.0);
  EXPECT_EQ(c.at(2, 2), m.at(8, 8));
  EXPECT_FALSE(c.grid.has_value());
  EXPECT_THROW(m.crop({100.0, 0.0}, 1.0), DomainError);
}
