#pragma once

#include <complex>

namespace ndphoton {

/// Bessel functions of the first kind, orders 0 and 1. Power series for
/// |x| <= 12, Hankel asymptotic expansion (optimally truncated) beyond.
double bessel_j0(double x);
double bessel_j1(double x);

/// Same split with complex arithmetic; needed for the Bessel-Gauss amplitude
/// away from the waist, where the argument is k_t rho / mu.
std::complex<double> bessel_j0(std::complex<double> z);
std::complex<double> bessel_j1(std::complex<double> z);

/// exp(-x) I0(x) for x >= 0; bounded in (0, 1] and never overflows.
/// Throws DomainError for negative or non-finite x.
double bessel_i0_scaled(double x);

/// 2 J1(x) / x, with jinc(0) = 1. Fourier transform of a uniform disk.
double jinc(double x);

}  // namespace ndphoton
