#include "ndphoton/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ndphoton/error.hpp"

namespace ndphoton {

void Profile::validate() const {
  if (coords.size() != values.size()) throw DomainError("profile coordinate/value size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(coords[i])) {
      throw DomainError("profile contains non-finite entries");
    }
    if (i > 0 && !(coords[i] > coords[i - 1])) {
      throw DomainError("profile coordinates must be strictly increasing");
    }
  }
}

RadialProfile radial_profile(const RealMap& map, Vec2 center, std::size_t n_bins,
                             double bin_width) {
  if (n_bins < 8) throw DomainError("radial_profile needs n_bins >= 8");
  if (map.nx == 0 || map.ny == 0) throw DomainError("radial_profile on an empty map");
  if (center.x < map.x(0) || center.x > map.x(map.nx - 1) || center.y < map.y(0) ||
      center.y > map.y(map.ny - 1)) {
    throw DomainError("radial_profile centre lies outside the map");
  }
  const double w = bin_width > 0.0 ? bin_width : map.pitch;
  std::vector<double> sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t r = 0; r < map.ny; ++r) {
    const double dy = map.y(r) - center.y;
    for (std::size_t c = 0; c < map.nx; ++c) {
      const double rad = std::hypot(map.x(c) - center.x, dy);
      const auto b = static_cast<std::size_t>(std::floor(rad / w + 0.5));
      if (b >= n_bins) continue;
      sum[b] += map.at(r, c);
      ++count[b];
    }
  }

  RadialProfile prof;
  prof.domain = map.domain;
  prof.center = center;
  prof.bin_width = w;
  prof.coords.resize(n_bins);
  prof.values.assign(n_bins, 0.0);
  prof.interpolated.assign(n_bins, false);
  std::vector<std::size_t> filled;
  for (std::size_t b = 0; b < n_bins; ++b) {
    prof.coords[b] = static_cast<double>(b) * w;
    if (count[b] > 0) {
      prof.values[b] = sum[b] / static_cast<double>(count[b]);
      filled.push_back(b);
    } else {
      prof.interpolated[b] = true;
    }
  }
  if (filled.empty()) throw DomainError("radial_profile: no samples fall in any bin");
  std::size_t next = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (!prof.interpolated[b]) continue;
    while (next < filled.size() && filled[next] < b) ++next;
    if (next == 0) {
      prof.values[b] = prof.values[filled.front()];
    } else if (next == filled.size()) {
      prof.values[b] = prof.values[filled.back()];
    } else {
      const std::size_t lo = filled[next - 1];
      const std::size_t hi = filled[next];
      const double t = static_cast<double>(b - lo) / static_cast<double>(hi - lo);
      prof.values[b] = (1.0 - t) * prof.values[lo] + t * prof.values[hi];
    }
  }
  return prof;
}

Vec2 centroid(const RealMap& map) {
  double s = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t r = 0; r < map.ny; ++r) {
    for (std::size_t c = 0; c < map.nx; ++c) {
      const double v = map.at(r, c);
      s += v;
      sx += v * map.x(c);
      sy += v * map.y(r);
    }
  }
  if (!(s > 0.0)) throw DomainError("centroid of a map with no positive weight");
  return {sx / s, sy / s};
}

std::optional<AnnulusFit> annulus_fit(const RealMap& map) {
  if (map.nx < 3 || map.ny < 3) return std::nullopt;
  Vec2 c;
  try {
    c = centroid(map);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  const double w = map.pitch / 4.0;
  double rmax = 0.0;
  for (double x : {map.x(0), map.x(map.nx - 1)}) {
    for (double y : {map.y(0), map.y(map.ny - 1)}) {
      rmax = std::max(rmax, std::hypot(x - c.x, y - c.y));
    }
  }
  const auto n_bins = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(rmax / w)) + 2);
  const RadialProfile prof = radial_profile(map, c, n_bins, w);
  const auto& r = prof.coords;
  const std::size_t n = r.size();

  // A monotone (centre-peaked) mean profile has no ring.
  const auto mean_peak = std::max_element(prof.values.begin(), prof.values.end());
  if (r[static_cast<std::size_t>(mean_peak - prof.values.begin())] <= map.pitch) {
    return std::nullopt;
  }

  // Radial power r <I>(r) removes the 1/r pull of the mean toward the axis.
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = prof.values[i] * r[i];
  const std::size_t i =
      static_cast<std::size_t>(std::max_element(p.begin() + 1, p.end()) - p.begin());
  if (i + 1 >= n) return std::nullopt;

  const double y0 = p[i - 1];
  const double y1 = p[i];
  const double y2 = p[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  const double d = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
  const double peak_r = r[i] + d * w;
  const double peak_v = y1 - 0.25 * (y0 - y2) * d;
  const double h = peak_v * std::exp(-2.0);

  std::size_t j = i;
  while (j + 1 < n && p[j] > h) ++j;
  if (p[j] > h) return std::nullopt;
  const double xr = r[j - 1] + (h - p[j - 1]) / (p[j] - p[j - 1]) * (r[j] - r[j - 1]);
  j = i;
  while (j > 0 && p[j] > h) --j;
  if (p[j] > h) return std::nullopt;
  const double xl = r[j] + (h - p[j]) / (p[j + 1] - p[j]) * (r[j + 1] - r[j]);

  AnnulusFit fit;
  fit.kt_fit = std::max(peak_r, 0.0);
  fit.delta_k = xr - xl;
  if (!(fit.delta_k > 0.0)) return std::nullopt;
  fit.w0_fit = 4.0 / fit.delta_k;
  fit.center = c;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const double dr = r[b] - peak_r;
    if (std::abs(dr) > fit.delta_k) continue;
    const double model = peak_v * std::exp(-8.0 * dr * dr / (fit.delta_k * fit.delta_k));
    num += (p[b] - model) * (p[b] - model);
    den += p[b] * p[b];
  }
  fit.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return fit;
}

double fwhm(const Profile& profile) {
  profile.validate();
  const auto& x = profile.coords;
  const auto& v = profile.values;
  if (v.size() < 3) throw DomainError("fwhm needs at least three samples");
  const std::size_t i =
      static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  if (i == 0 || i + 1 == v.size()) throw DomainError("fwhm: peak lies on the profile boundary");
  if (!(v[i] > 0.0)) throw DomainError("fwhm: profile has no positive peak");
  const double h = 0.5 * v[i];

  std::size_t l = i;
  while (l > 0 && v[l] > h) --l;
  if (v[l] > h) throw DomainError("fwhm: left half-maximum crossing lies outside the profile");
  std::size_t r = i;
  while (r + 1 < v.size() && v[r] > h) ++r;
  if (v[r] > h) throw DomainError("fwhm: right half-maximum crossing lies outside the profile");

  const double xl = x[l] + (h - v[l]) / (v[l + 1] - v[l]) * (x[l + 1] - x[l]);
  const double xr = x[r - 1] + (h - v[r - 1]) / (v[r] - v[r - 1]) * (x[r] - x[r - 1]);
  return xr - xl;
}

double z_max_formula(double w0, double k_signal, double kt, double magnification) {
  if (!(kt > 0.0) || !std::isfinite(kt)) throw DomainError("z_max_formula requires kt > 0");
  if (!(w0 > 0.0) || !(k_signal > 0.0)) {
    throw DomainError("z_max_formula requires w0 > 0 and k > 0");
  }
  return magnification * magnification * w0 * k_signal / kt;
}

double nondiffracting_range(const std::vector<double>& z, const std::vector<double>& widths,
                            double tolerance) {
  if (z.size() != widths.size()) throw DomainError("z and width lists differ in length");
  if (z.size() < 3) throw DomainError("nondiffracting_range needs at least three planes");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  const auto origin = std::find(z.begin(), z.end(), 0.0);
  if (origin == z.end()) throw DomainError("nondiffracting_range needs a z = 0 plane");
  const double w_ref = widths[static_cast<std::size_t>(origin - z.begin())];
  if (!(w_ref > 0.0) || !std::isfinite(w_ref)) {
    throw DomainError("width at z = 0 must be finite and positive");
  }
  double range = 0.0;
  for (std::size_t i = static_cast<std::size_t>(origin - z.begin()); i < z.size(); ++i) {
    if (i > 0 && !(z[i] > z[i - 1])) throw DomainError("z list must be strictly increasing");
    if (!(widths[i] <= (1.0 + tolerance) * w_ref)) break;
    range = z[i];
  }
  return range;
}

}  // namespace ndphoton
