#include "ndphoton/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"

namespace ndphoton {
namespace {

void check_finite(std::span<const cplx> v) {
  for (const cplx& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("field contains a non-finite sample");
    }
  }
}

// Row partial sums reduced in row order: identical for any thread count.
template <class F>
double ordered_row_sum(std::size_t rows, std::size_t cols, F&& term) {
  std::vector<double> partial(rows, 0.0);
  parallel_for(0, rows, [&](std::size_t r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += term(r * cols + c);
    partial[r] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

ComplexField::ComplexField(GridSpec grid, Domain domain)
    : grid_(grid), domain_(domain), values_(grid.size(), cplx{}) {}

ComplexField::ComplexField(GridSpec grid, Domain domain, std::vector<cplx> values)
    : grid_(grid), domain_(domain), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("field has " + std::to_string(values_.size()) +
                      " samples, grid needs " + std::to_string(grid_.size()));
  }
  check_finite(values_);
}

ComplexField ComplexField::relabeled(GridSpec grid, Domain domain) const& {
  ComplexField out = *this;
  return std::move(out).relabeled(grid, domain);
}

ComplexField ComplexField::relabeled(GridSpec grid, Domain domain) && {
  if (grid.n() != grid_.n()) throw DomainError("relabel cannot change the sample count");
  grid_ = grid;
  domain_ = domain;
  return std::move(*this);
}

double energy(const ComplexField& field) {
  const auto v = field.values();
  const double p = field.pitch();
  return ordered_row_sum(field.n(), field.n(), [&](std::size_t i) { return std::norm(v[i]); }) *
         p * p;
}

void normalize_energy(ComplexField& field) {
  const double e = energy(field);
  if (!(e > 0.0)) throw DomainError("cannot normalize a field with zero energy");
  const double s = 1.0 / std::sqrt(e);
  for (cplx& c : field.values()) c *= s;
}

ComplexField to_momentum(const ComplexField& field) {
  if (field.domain() != Domain::Position) {
    throw DomainTagError("to_momentum expects a position-domain field");
  }
  ComplexField out = field.relabeled(field.grid(), Domain::Momentum);
  const double dx = field.grid().dx();
  detail::centered_fft2d(out.values(), out.n(), -1, dx * dx / (2.0 * std::numbers::pi));
  return out;
}

ComplexField to_position(const ComplexField& field) {
  if (field.domain() != Domain::Momentum) {
    throw DomainTagError("to_position expects a momentum-domain field");
  }
  ComplexField out = field.relabeled(field.grid(), Domain::Position);
  const double dk = field.grid().dk();
  detail::centered_fft2d(out.values(), out.n(), +1, dk * dk / (2.0 * std::numbers::pi));
  return out;
}

std::vector<double> intensity(const ComplexField& field) {
  std::vector<double> out(field.values().size());
  const auto v = field.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(v[i]);
  return out;
}

double phase_aligned_l2(const ComplexField& a, const ComplexField& b) {
  const auto va = a.values();
  const auto vb = b.values();
  if (va.size() != vb.size()) throw DomainError("phase_aligned_l2: size mismatch");
  cplx overlap{};
  for (std::size_t i = 0; i < va.size(); ++i) overlap += std::conj(vb[i]) * va[i];
  const cplx rot = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    num += std::norm(va[i] - rot * vb[i]);
    den += std::norm(va[i]);
  }
  return std::sqrt(num / den);
}

double relative_l2(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DomainError("relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(a[i]);
  }
  return std::sqrt(num / den);
}

double relative_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return std::sqrt(num / den);
}

RealMap RealMap::on_grid(const GridSpec& grid, Domain domain, std::vector<double> values) {
  if (values.size() != grid.size()) throw DomainError("map size does not match grid");
  RealMap m;
  m.nx = m.ny = grid.n();
  m.pitch = grid.pitch(domain);
  m.x0 = m.y0 = grid.coord(domain, 0);
  m.domain = domain;
  m.values = std::move(values);
  m.grid = grid;
  return m;
}

double RealMap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

RealMap RealMap::crop(Vec2 center, double half_width) const {
  auto range = [&](double origin, double c, std::size_t count) {
    const double lo = (c - half_width - origin) / pitch;
    const double hi = (c + half_width - origin) / pitch;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil(lo - 1e-9));
    const auto last = static_cast<std::ptrdiff_t>(std::floor(hi + 1e-9));
    const std::ptrdiff_t a = std::max<std::ptrdiff_t>(first, 0);
    const std::ptrdiff_t b = std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(count) - 1);
    if (b < a) throw DomainError("crop window lies outside the map");
    return std::pair<std::size_t, std::size_t>(a, b - a + 1);
  };
  const auto [c0, cn] = range(x0, center.x, nx);
  const auto [r0, rn] = range(y0, center.y, ny);
  RealMap out;
  out.nx = cn;
  out.ny = rn;
  out.pitch = pitch;
  out.x0 = x(c0);
  out.y0 = y(r0);
  out.domain = domain;
  out.values.resize(cn * rn);
  for (std::size_t r = 0; r < rn; ++r) {
    for (std::size_t c = 0; c < cn; ++c) out.values[r * cn + c] = at(r0 + r, c0 + c);
  }
  return out;
}

RealMap RealMap::peak_normalized() const {
  RealMap out = *this;
  const double m = max();
  if (m > 0.0) {
    for (double& v : out.values) v /= m;
  }
  return out;
}

}  // namespace ndphoton
