#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ndphoton::detail {

/// In-place unnormalized 2-D DFT of an n x n row-major array. sign = -1 is the
/// forward transform exp(-2 pi i jk / n), +1 the backward one. Plans are
/// created once per (n, sign) with FFTW_ESTIMATE so results are reproducible
/// run to run; execution is thread-safe.
void fft2d(std::span<std::complex<double>> data, std::size_t n, int sign);

/// Centred transform: DC at index n/2 on input and output. Applies the
/// (-1)^(row+col) modulation around fft2d and multiplies by `scale`.
void centered_fft2d(std::span<std::complex<double>> data, std::size_t n, int sign,
                    double scale);

}  // namespace ndphoton::detail
