// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>

#include "streamenh/common.hpp"

namespace streamenh {

/// Position-wise affine map y = W x + b applied to every row.
template <typename Scalar>
struct LinearWeights {
  int in_features = 0;
  int out_features = 0;
  RowMatrix<Scalar> w_t;  // [in x out]
  Vector<Scalar> bias;    // [out]

  /// `weight` is row-major [out x in].
  static LinearWeights from_tensor(std::span<const float> weight,
                                   std::span<const float> bias, int in_features,
                                   int out_features) {
    LinearWeights l;
    l.in_features = in_features;
    l.out_features = out_features;
    l.w_t = Eigen::Map<const RowMatrix<float>>(weight.data(), out_features,
                                               in_features)
                .transpose()
                .template cast<Scalar>();
    l.bias = Eigen::Map<const Vector<float>>(bias.data(), out_features)
                 .template cast<Scalar>();
    return l;
  }
};

template <typename Scalar>
void linear(const RowMatrix<Scalar>& x, const LinearWeights<Scalar>& w,
            RowMatrix<Scalar>& out) {
  if (x.cols() != w.in_features || out.rows() != x.rows() ||
      out.cols() != w.out_features)
    throw Error(ErrorCode::kShape, "linear operand shapes");
  out.noalias() = x * w.w_t;
  out.rowwise() += w.bias.transpose();
}

}  // namespace streamenh
