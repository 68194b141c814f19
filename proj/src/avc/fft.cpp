#include "avc/fft.hpp"

#include <cmath>

#include "avc/common.hpp"

namespace avc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Fft::Fft(size_t n) : n_(n), pow2_(is_pow2(n)) {
  require(n >= 1, Status::InvalidArgument, "fft size must be positive");
  if (pow2_ && n_ > 1) {
    bitrev_.resize(n_);
    size_t log2n = 0;
    while ((size_t{1} << log2n) < n_) ++log2n;
    for (size_t i = 0; i < n_; ++i) {
      size_t r = 0;
      for (size_t b = 0; b < log2n; ++b)
        if (i & (size_t{1} << b)) r |= size_t{1} << (log2n - 1 - b);
      bitrev_[i] = r;
    }
    twiddles_.resize(n_ / 2);
    for (size_t k = 0; k < n_ / 2; ++k) {
      double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n_);
      twiddles_[k] = {std::cos(a), std::sin(a)};
    }
  } else if (!pow2_) {
    roots_.resize(n_);
    for (size_t k = 0; k < n_; ++k) {
      double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n_);
      roots_[k] = {std::cos(a), std::sin(a)};
    }
  }
}

void Fft::forward(std::complex<double>* x) const { transform(x, false); }

void Fft::inverse(std::complex<double>* x) const {
  transform(x, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (size_t i = 0; i < n_; ++i) x[i] *= scale;
}

void Fft::transform(std::complex<double>* x, bool invert) const {
  if (n_ == 1) return;
  if (!pow2_) {
    transform_direct(x, invert);
    return;
  }
  for (size_t i = 0; i < n_; ++i) {
    size_t j = bitrev_[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n_; len <<= 1) {
    size_t half = len >> 1;
    size_t step = n_ / len;
    for (size_t base = 0; base < n_; base += len) {
      for (size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * step];
        if (invert) w = std::conj(w);
        std::complex<double> u = x[base + k];
        std::complex<double> v = x[base + k + half] * w;
        x[base + k] = u + v;
        x[base + k + half] = u - v;
      }
    }
  }
}

void Fft::transform_direct(std::complex<double>* x, bool invert) const {
  std::vector<std::complex<double>> out(n_);
  for (size_t k = 0; k < n_; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (size_t t = 0; t < n_; ++t) {
      std::complex<double> w = roots_[(k * t) % n_];
      if (invert) w = std::conj(w);
      acc += x[t] * w;
    }
    out[k] = acc;
  }
  for (size_t k = 0; k < n_; ++k) x[k] = out[k];
}

}  // namespace avc
