#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "ndphoton/parallel.hpp"

namespace ndphoton::detail {
namespace {

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never touches the buffer, and FFTW_UNALIGNED lets the
    // plan run on std::vector storage of any alignment.
    std::vector<std::complex<double>> scratch(n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void modulate(std::span<std::complex<double>> data, std::size_t n, double scale) {
  parallel_for(0, n, [&](std::size_t row) {
    auto* p = data.data() + row * n;
    const double row_sign = (row % 2 == 0) ? scale : -scale;
    for (std::size_t col = 0; col < n; ++col) {
      p[col] *= (col % 2 == 0) ? row_sign : -row_sign;
    }
  });
}

}  // namespace

void fft2d(std::span<std::complex<double>> data, std::size_t n, int sign) {
  fftw_plan plan = cache().get(n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void centered_fft2d(std::span<std::complex<double>> data, std::size_t n, int sign,
                    double scale) {
  modulate(data, n, 1.0);
  fft2d(data, n, sign);
  modulate(data, n, scale);
}

}  // namespace ndphoton::detail
