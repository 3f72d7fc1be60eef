// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace streamenh {

// Dense row-major storage: one row per frequency position, channels
// contiguous. Every per-frame activation in the engine has this layout.
template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Single-frame activation, [frequency positions x channels].
using FeatureMap = RowMatrix<float>;

/// One-sided spectrum of a real frame, fft_size / 2 + 1 bins.
using ComplexSpectrum = Eigen::VectorXcf;

enum class ErrorCode {
  kInputSize = 1,
  kNumeric,
  kShape,
  kConfig,
  kUnknownPreset,
  kUnknownVariant,
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kBadDtype,
  kShapeMismatch,
  kAlreadyFused,
  kFusion,
  kStateMismatch,
  kIo,
  kFormat,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace streamenh
