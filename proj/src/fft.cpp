#include "cavmag/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "cavmag/errors.hpp"

namespace cavmag {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(int n) : n_(n), buf_(n) {
  if (n < 1) throw ConfigError("Fft: size must be >= 1");
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(n, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
}

void Fft::forward(std::vector<std::complex<double>>& v) {
  std::memcpy(buf_.data(), v.data(), sizeof(std::complex<double>) * n_);
  fftw_execute(fwd_);
  std::memcpy(v.data(), buf_.data(), sizeof(std::complex<double>) * n_);
}

void Fft::inverse(std::vector<std::complex<double>>& v) {
  std::memcpy(buf_.data(), v.data(), sizeof(std::complex<double>) * n_);
  fftw_execute(bwd_);
  const double inv = 1.0 / n_;
  for (int i = 0; i < n_; ++i) v[i] = buf_[i] * inv;
}

}  // namespace cavmag
