#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace avc {

// Error categories. Numeric values are shared with the C API in avc.h.
enum class Status : int {
  Ok = 0,
  InvalidArgument = 1,
  Io = 2,
  BadFormat = 3,
  UnsupportedChannels = 4,
  UnsupportedEncoding = 5,
  BadSampleRate = 6,
  ParseError = 7,
  DimensionMismatch = 8,
  NumericFailure = 9,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Status code() const { return code_; }

 private:
  Status code_;
};

inline void require(bool ok, Status code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

// Row-major float32 matrix. Feature tensors and model storage use this type;
// it matches the on-disk cache precision.
struct Matrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int64_t r, int64_t c)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0f) {}

  float* row(int64_t r) { return data.data() + r * cols; }
  const float* row(int64_t r) const { return data.data() + r * cols; }
  float& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols + c)]; }
  float at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols + c)]; }
};

// Row-major double matrix for intermediate computations.
struct DMatrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<double> data;

  DMatrix() = default;
  DMatrix(int64_t r, int64_t c)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}

  double* row(int64_t r) { return data.data() + r * cols; }
  const double* row(int64_t r) const { return data.data() + r * cols; }
  double& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols + c)]; }
  double at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols + c)]; }
};

using Series = std::vector<double>;

}  // namespace avc
