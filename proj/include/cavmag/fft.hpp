#pragma once
// Thin FFTW wrapper: one forward and one inverse plan over an internal
// buffer. FFTW_ESTIMATE keeps plan selection deterministic; plan creation is
// serialized behind a mutex because the FFTW planner is not thread safe.
#include <complex>
#include <vector>

struct fftw_plan_s;

namespace cavmag {

class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // In-place transforms on the caller's vector (size must equal n).
  void forward(std::vector<std::complex<double>>& v);
  void inverse(std::vector<std::complex<double>>& v);  // normalized by 1/n

  int size() const { return n_; }

 private:
  int n_;
  std::vector<std::complex<double>> buf_;
  fftw_plan_s* fwd_;
  fftw_plan_s* bwd_;
};

}  // namespace cavmag
