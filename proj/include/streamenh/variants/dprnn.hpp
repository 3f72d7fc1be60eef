// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "streamenh/common.hpp"
#include "streamenh/kernels/gru.hpp"
#include "streamenh/kernels/linear.hpp"

namespace streamenh {

/// Bidirectional GRU over the frequency positions of one frame, projected
/// from 2G back to C channels.
template <typename Scalar>
struct BiGruWeights {
  GruWeights<Scalar> forward;
  GruWeights<Scalar> backward;
  LinearWeights<Scalar> proj;  // [2G -> C]
};

template <typename Scalar>
struct BiGruScratch {
  RowMatrix<Scalar> gi_fwd;  // [positions x 3G]
  RowMatrix<Scalar> gi_bwd;  // [positions x 3G]
  RowMatrix<Scalar> gh;      // [1 x 3G]
  RowMatrix<Scalar> h;       // [1 x G]
  RowMatrix<Scalar> hidden;  // [positions x 2G]

  void resize(Eigen::Index positions, int gru_hidden) {
    gi_fwd.resize(positions, 3 * gru_hidden);
    gi_bwd.resize(positions, 3 * gru_hidden);
    gh.resize(1, 3 * gru_hidden);
    h.resize(1, gru_hidden);
    hidden.resize(positions, 2 * gru_hidden);
  }
};

/// Frequency scan inside one frame; both directions start from a zero
/// hidden state, so nothing carries across time.
template <typename Scalar>
void dprnn_freq_step(const RowMatrix<Scalar>& x, const BiGruWeights<Scalar>& w,
                     BiGruScratch<Scalar>& s, RowMatrix<Scalar>& out) {
  const int g = w.forward.hidden_size;
  const Eigen::Index positions = x.rows();
  if (x.cols() != w.forward.input_size || x.cols() != w.backward.input_size ||
      w.proj.in_features != 2 * g)
    throw Error(ErrorCode::kShape, "dprnn_freq_step operand shapes");
  s.gi_fwd.noalias() = x * w.forward.w_ih_t;
  s.gi_fwd.rowwise() += w.forward.b_ih.transpose();
  s.gi_bwd.noalias() = x * w.backward.w_ih_t;
  s.gi_bwd.rowwise() += w.backward.b_ih.transpose();

  s.h.setZero();
  for (Eigen::Index f = 0; f < positions; ++f) {
    s.gh.noalias() = s.h * w.forward.w_hh_t;
    s.gh += w.forward.b_hh.transpose();
    gru_combine_row(s.gi_fwd.row(f).data(), s.gh.data(), s.h.data(), g);
    s.hidden.row(f).head(g) = s.h.row(0);
  }
  s.h.setZero();
  for (Eigen::Index f = positions - 1; f >= 0; --f) {
    s.gh.noalias() = s.h * w.backward.w_hh_t;
    s.gh += w.backward.b_hh.transpose();
    gru_combine_row(s.gi_bwd.row(f).data(), s.gh.data(), s.h.data(), g);
    s.hidden.row(f).tail(g) = s.h.row(0);
  }
  linear(s.hidden, w.proj, out);
}

}  // namespace streamenh
