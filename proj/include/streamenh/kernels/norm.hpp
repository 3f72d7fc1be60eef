// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>

#include "streamenh/common.hpp"

namespace streamenh {

/// Inference-mode batch normalization parameters (running statistics).
template <typename Scalar>
struct BatchNormParams {
  Vector<Scalar> gamma;
  Vector<Scalar> beta;
  Vector<Scalar> running_mean;
  Vector<Scalar> running_var;
  Scalar eps = Scalar(1e-5);
};

template <typename Scalar>
struct LayerNormParams {
  Vector<Scalar> gamma;
  Vector<Scalar> beta;
  Scalar eps = Scalar(1e-5);
};

/// (x - mean) * gamma / sqrt(var + eps) + beta per channel. `out` may be x.
template <typename Scalar>
void batchnorm_infer(const RowMatrix<Scalar>& x, const BatchNormParams<Scalar>& p,
                     RowMatrix<Scalar>& out) {
  const Eigen::Index ch = x.cols();
  if (p.gamma.size() != ch || p.beta.size() != ch ||
      p.running_mean.size() != ch || p.running_var.size() != ch ||
      out.rows() != x.rows() || out.cols() != ch)
    throw Error(ErrorCode::kShape, "batchnorm channel count");
  for (Eigen::Index c = 0; c < ch; ++c) {
    const Scalar denom = p.running_var[c] + p.eps;
    if (!(denom > Scalar(0)))
      throw Error(ErrorCode::kNumeric, "batchnorm var + eps <= 0");
    const Scalar inv = Scalar(1) / std::sqrt(denom);
    const Scalar mean = p.running_mean[c];
    const Scalar gamma = p.gamma[c];
    const Scalar beta = p.beta[c];
    for (Eigen::Index f = 0; f < x.rows(); ++f)
      out(f, c) = (x(f, c) - mean) * inv * gamma + beta;
  }
}

template <typename Scalar>
RowMatrix<Scalar> batchnorm_infer(const RowMatrix<Scalar>& x,
                                  const BatchNormParams<Scalar>& p) {
  RowMatrix<Scalar> out(x.rows(), x.cols());
  batchnorm_infer(x, p, out);
  return out;
}

/// Normalizes each frequency row over its channels, then applies the affine.
/// `out` may be x.
template <typename Scalar>
void layernorm(const RowMatrix<Scalar>& x, const LayerNormParams<Scalar>& p,
               RowMatrix<Scalar>& out) {
  const Eigen::Index ch = x.cols();
  if (p.gamma.size() != ch || p.beta.size() != ch || out.rows() != x.rows() ||
      out.cols() != ch)
    throw Error(ErrorCode::kShape, "layernorm channel count");
  for (Eigen::Index f = 0; f < x.rows(); ++f) {
    const Scalar mean = x.row(f).mean();
    const Scalar var = (x.row(f).array() - mean).square().mean();
    const Scalar inv = Scalar(1) / std::sqrt(var + p.eps);
    for (Eigen::Index c = 0; c < ch; ++c)
      out(f, c) = (x(f, c) - mean) * inv * p.gamma[c] + p.beta[c];
  }
}

template <typename Scalar>
RowMatrix<Scalar> layernorm(const RowMatrix<Scalar>& x,
                            const LayerNormParams<Scalar>& p) {
  RowMatrix<Scalar> out(x.rows(), x.cols());
  layernorm(x, p, out);
  return out;
}

}  // namespace streamenh
