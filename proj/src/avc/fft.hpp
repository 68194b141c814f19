#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace avc {

// Complex DFT, X[k] = sum_n x[n] exp(-2*pi*i*k*n/N). Iterative radix-2 for
// power-of-two sizes, direct evaluation otherwise. Twiddle tables are built
// once per instance, so reuse one Fft for repeated transforms of one size.
class Fft {
 public:
  explicit Fft(size_t n);

  size_t size() const { return n_; }
  void forward(std::complex<double>* x) const;
  void inverse(std::complex<double>* x) const;  // scaled by 1/N

 private:
  void transform(std::complex<double>* x, bool invert) const;
  void transform_direct(std::complex<double>* x, bool invert) const;

  size_t n_;
  bool pow2_;
  std::vector<size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2*pi*i*k/N), k < N/2 (pow2)
  std::vector<std::complex<double>> roots_;     // exp(-2*pi*i*k/N), k < N (direct)
};

}  // namespace avc
