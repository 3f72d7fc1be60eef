// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>

#include "streamenh/common.hpp"

namespace streamenh {

enum class ActivationKind { kPrelu, kSigmoid, kTanh };

template <typename Scalar>
inline Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

template <typename Scalar>
inline Scalar prelu(Scalar x, Scalar slope) {
  return x >= Scalar(0) ? x : slope * x;
}

/// In-place per-channel PReLU.
template <typename Scalar>
void prelu_inplace(RowMatrix<Scalar>& x, const Vector<Scalar>& slope) {
  if (slope.size() != x.cols()) throw Error(ErrorCode::kShape, "prelu slope");
  for (Eigen::Index f = 0; f < x.rows(); ++f)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      x(f, c) = prelu(x(f, c), slope[c]);
}

/// Elementwise activation. `slope` is only read for kPrelu.
template <typename Scalar>
RowMatrix<Scalar> activation(const RowMatrix<Scalar>& x, ActivationKind kind,
                             const Vector<Scalar>& slope = {}) {
  RowMatrix<Scalar> out = x;
  switch (kind) {
    case ActivationKind::kPrelu:
      prelu_inplace(out, slope);
      break;
    case ActivationKind::kSigmoid:
      out = out.unaryExpr([](Scalar v) { return sigmoid(v); });
      break;
    case ActivationKind::kTanh:
      out = out.array().tanh().matrix();
      break;
  }
  return out;
}

}  // namespace streamenh
