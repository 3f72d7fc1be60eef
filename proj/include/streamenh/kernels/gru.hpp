// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <span>

#include "streamenh/common.hpp"
#include "streamenh/kernels/activation.hpp"

namespace streamenh {

/// GRU cell with packed gates in (reset, update, new) order. The reset gate
/// multiplies the hidden-to-hidden product after its bias:
///   r = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
///   z = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
///   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
///   h' = (1 - z) * n + z * h
/// Weights are kept transposed (input x 3H) so a batch of positions runs as
/// one GEMM per side.
template <typename Scalar>
struct GruWeights {
  int input_size = 0;
  int hidden_size = 0;
  RowMatrix<Scalar> w_ih_t;  // [input x 3H]
  RowMatrix<Scalar> w_hh_t;  // [hidden x 3H]
  Vector<Scalar> b_ih;       // [3H]
  Vector<Scalar> b_hh;       // [3H]

  /// w_ih is row-major [3H x input], w_hh is [3H x hidden].
  static GruWeights from_tensors(std::span<const float> w_ih,
                                 std::span<const float> w_hh,
                                 std::span<const float> b_ih,
                                 std::span<const float> b_hh, int input_size,
                                 int hidden_size) {
    GruWeights g;
    g.input_size = input_size;
    g.hidden_size = hidden_size;
    const int gates = 3 * hidden_size;
    g.w_ih_t = Eigen::Map<const RowMatrix<float>>(w_ih.data(), gates, input_size)
                   .transpose()
                   .template cast<Scalar>();
    g.w_hh_t = Eigen::Map<const RowMatrix<float>>(w_hh.data(), gates, hidden_size)
                   .transpose()
                   .template cast<Scalar>();
    g.b_ih = Eigen::Map<const Vector<float>>(b_ih.data(), gates).template cast<Scalar>();
    g.b_hh = Eigen::Map<const Vector<float>>(b_hh.data(), gates).template cast<Scalar>();
    return g;
  }
};

template <typename Scalar>
struct GruScratch {
  RowMatrix<Scalar> gi;  // [positions x 3H]
  RowMatrix<Scalar> gh;  // [positions x 3H]

  void resize(Eigen::Index positions, int hidden) {
    gi.resize(positions, 3 * hidden);
    gh.resize(positions, 3 * hidden);
  }
};

/// Gate nonlinearity for one position given both gate pre-activations
/// (3H values each); updates the H hidden values in place.
template <typename Scalar>
inline void gru_combine_row(const Scalar* gi, const Scalar* gh, Scalar* h,
                            Eigen::Index hidden) {
  for (Eigen::Index j = 0; j < hidden; ++j) {
    const Scalar r = sigmoid(gi[j] + gh[j]);
    const Scalar z = sigmoid(gi[hidden + j] + gh[hidden + j]);
    const Scalar n = std::tanh(gi[2 * hidden + j] + r * gh[2 * hidden + j]);
    h[j] = (Scalar(1) - z) * n + z * h[j];
  }
}

template <typename Scalar>
void gru_combine(const RowMatrix<Scalar>& gi, const RowMatrix<Scalar>& gh,
                 RowMatrix<Scalar>& h) {
  for (Eigen::Index p = 0; p < h.rows(); ++p)
    gru_combine_row(gi.row(p).data(), gh.row(p).data(), h.row(p).data(),
                    h.cols());
}

/// One time step for every row (position) of x, updating h in place.
/// x: [positions x input], h: [positions x hidden].
template <typename Scalar>
void gru_step(const RowMatrix<Scalar>& x, RowMatrix<Scalar>& h,
              const GruWeights<Scalar>& w, GruScratch<Scalar>& scratch) {
  if (x.cols() != w.input_size || h.cols() != w.hidden_size ||
      x.rows() != h.rows())
    throw Error(ErrorCode::kShape, "gru_step operand shapes");
  scratch.gi.noalias() = x * w.w_ih_t;
  scratch.gi.rowwise() += w.b_ih.transpose();
  scratch.gh.noalias() = h * w.w_hh_t;
  scratch.gh.rowwise() += w.b_hh.transpose();
  gru_combine(scratch.gi, scratch.gh, h);
}

/// Single-vector form.
template <typename Scalar>
Vector<Scalar> gru_step(const Vector<Scalar>& x, const Vector<Scalar>& h,
                        const GruWeights<Scalar>& w) {
  RowMatrix<Scalar> xs = x.transpose();
  RowMatrix<Scalar> hs = h.transpose();
  GruScratch<Scalar> scratch;
  scratch.resize(1, w.hidden_size);
  gru_step(xs, hs, w, scratch);
  return hs.row(0).transpose();
}

}  // namespace streamenh
