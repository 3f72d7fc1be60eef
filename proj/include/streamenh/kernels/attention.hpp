// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <span>

#include "streamenh/common.hpp"

namespace streamenh {

/// Multi-head self-attention projections. Q, K and V are packed side by side
/// into one [C x 3C] matrix (transposed from the [C x C] out-by-in tensors)
/// so the three input projections run as a single GEMM.
template <typename Scalar>
struct MhsaWeights {
  int channels = 0;
  int heads = 1;
  RowMatrix<Scalar> w_qkv_t;  // [C x 3C]
  Vector<Scalar> b_qkv;       // [3C]
  RowMatrix<Scalar> w_o_t;    // [C x C]
  Vector<Scalar> b_o;         // [C]

  int head_dim() const { return channels / heads; }

  static MhsaWeights from_tensors(std::span<const float> w_q, std::span<const float> b_q,
                                  std::span<const float> w_k, std::span<const float> b_k,
                                  std::span<const float> w_v, std::span<const float> b_v,
                                  std::span<const float> w_o, std::span<const float> b_o,
                                  int channels, int heads) {
    if (heads < 1 || channels % heads != 0)
      throw Error(ErrorCode::kShape, "channels must be divisible by heads");
    MhsaWeights m;
    m.channels = channels;
    m.heads = heads;
    const int c = channels;
    using Map = Eigen::Map<const RowMatrix<float>>;
    using VMap = Eigen::Map<const Vector<float>>;
    m.w_qkv_t.resize(c, 3 * c);
    m.w_qkv_t.leftCols(c) = Map(w_q.data(), c, c).transpose().template cast<Scalar>();
    m.w_qkv_t.middleCols(c, c) = Map(w_k.data(), c, c).transpose().template cast<Scalar>();
    m.w_qkv_t.rightCols(c) = Map(w_v.data(), c, c).transpose().template cast<Scalar>();
    m.b_qkv.resize(3 * c);
    m.b_qkv.head(c) = VMap(b_q.data(), c).template cast<Scalar>();
    m.b_qkv.segment(c, c) = VMap(b_k.data(), c).template cast<Scalar>();
    m.b_qkv.tail(c) = VMap(b_v.data(), c).template cast<Scalar>();
    m.w_o_t = Map(w_o.data(), c, c).transpose().template cast<Scalar>();
    m.b_o = VMap(b_o.data(), c).template cast<Scalar>();
    return m;
  }
};

template <typename Scalar>
struct MhsaScratch {
  RowMatrix<Scalar> qkv;      // [tokens x 3C]
  RowMatrix<Scalar> scores;   // [tokens x tokens]
  RowMatrix<Scalar> context;  // [tokens x C]

  void resize(Eigen::Index tokens, int channels) {
    qkv.resize(tokens, 3 * channels);
    scores.resize(tokens, tokens);
    context.resize(tokens, channels);
  }
};

/// Numerically stable in-place softmax over each row.
template <typename Scalar, typename Derived>
void softmax_rows(Eigen::MatrixBase<Derived>& scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const Scalar peak = scores.row(i).maxCoeff();
    Scalar total = 0;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      const Scalar e = std::exp(scores(i, j) - peak);
      scores(i, j) = e;
      total += e;
    }
    scores.row(i) /= total;
  }
}

/// Self-attention across the frequency positions of one frame. Every
/// position attends to every other; there is no positional encoding, so
/// the operation is equivariant to row permutations.
template <typename Scalar>
void mhsa_freq(const RowMatrix<Scalar>& x, const MhsaWeights<Scalar>& w,
               MhsaScratch<Scalar>& scratch, RowMatrix<Scalar>& out) {
  const int c = w.channels;
  const int d = w.head_dim();
  if (x.cols() != c || out.rows() != x.rows() || out.cols() != c)
    throw Error(ErrorCode::kShape, "mhsa_freq operand shapes");
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(d));
  scratch.qkv.noalias() = x * w.w_qkv_t;
  scratch.qkv.rowwise() += w.b_qkv.transpose();
  for (int h = 0; h < w.heads; ++h) {
    scratch.scores.noalias() = scratch.qkv.middleCols(h * d, d) *
                               scratch.qkv.middleCols(c + h * d, d).transpose();
    scratch.scores *= scale;
    softmax_rows<Scalar>(scratch.scores);
    scratch.context.middleCols(h * d, d).noalias() =
        scratch.scores * scratch.qkv.middleCols(2 * c + h * d, d);
  }
  out.noalias() = scratch.context * w.w_o_t;
  out.rowwise() += w.b_o.transpose();
}

template <typename Scalar>
RowMatrix<Scalar> mhsa_freq(const RowMatrix<Scalar>& x,
                            const MhsaWeights<Scalar>& w) {
  MhsaScratch<Scalar> scratch;
  scratch.resize(x.rows(), w.channels);
  RowMatrix<Scalar> out(x.rows(), w.channels);
  mhsa_freq(x, w, scratch, out);
  return out;
}

}  // namespace streamenh
