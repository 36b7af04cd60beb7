#include "ndphoton/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "ndphoton/error.hpp"

namespace ndphoton {
namespace {

using cplx = std::complex<double>;

constexpr double kSeriesLimit = 12.0;
constexpr double kI0SeriesLimit = 20.0;

// sum_k (-z^2/4)^k / (k! (k+nu)!) * (z/2)^nu for nu in {0, 1}.
template <class T>
T bessel_series(T z, int nu) {
  const T q = -z * z / 4.0;
  T term = (nu == 0) ? T(1.0) : z / 2.0;
  T sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion J_nu(z) = sqrt(2/(pi z)) (P cos w - Q sin w),
// w = z - nu pi/2 - pi/4, valid for Re z > 0.
template <class T>
T bessel_asymptotic(T z, int nu) {
  const double mu = 4.0 * nu * nu;
  const T inv = 1.0 / z;
  T p = 1.0;
  T q = 0.0;
  T term = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    T next = term * ((mu - odd * odd) / (8.0 * k)) * inv;
    const double mag = std::abs(next);
    if (mag > prev) break;  // optimal truncation: series starts to diverge
    term = next;
    prev = mag;
    // a_k / z^k enters P (k even) or Q (k odd) with sign (-1)^floor(k/2)
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (mag <= 1e-17 * std::abs(p)) break;
  }
  const T w = z - (nu * 0.5 + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(w) - q * std::sin(w));
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  return ax <= kSeriesLimit ? bessel_series(ax, 0) : bessel_asymptotic(ax, 0);
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double v = ax <= kSeriesLimit ? bessel_series(ax, 1) : bessel_asymptotic(ax, 1);
  return x < 0.0 ? -v : v;
}

std::complex<double> bessel_j0(std::complex<double> z) {
  if (z.imag() == 0.0) return bessel_j0(z.real());
  const cplx w = z.real() < 0.0 ? -z : z;
  return std::abs(w) <= kSeriesLimit ? bessel_series(w, 0) : bessel_asymptotic(w, 0);
}

std::complex<double> bessel_j1(std::complex<double> z) {
  if (z.imag() == 0.0) return bessel_j1(z.real());
  const bool flip = z.real() < 0.0;
  const cplx w = flip ? -z : z;
  const cplx v = std::abs(w) <= kSeriesLimit ? bessel_series(w, 1) : bessel_asymptotic(w, 1);
  return flip ? -v : v;
}

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_i0_scaled requires finite x >= 0");
  }
  if (x <= kI0SeriesLimit) {
    const double q = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term <= 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k c_k / x^k, c_k = c_{k-1} (2k-1)^2 / (8k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double jinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 8.0;
  return 2.0 * bessel_j1(x) / x;
}

}  // namespace ndphoton
