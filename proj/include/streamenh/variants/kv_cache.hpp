// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <vector>

#include "streamenh/common.hpp"
#include "streamenh/kernels/attention.hpp"

namespace streamenh {

/// Ring buffer of past key/value frames for time-axis attention. Each slot
/// holds the [positions x C] keys (or values) of one frame; heads are column
/// slices. Holds at most `capacity` frames: the current one plus
/// capacity - 1 frames of look-behind.
template <typename Scalar>
class KvCache {
 public:
  KvCache() = default;
  KvCache(int capacity, Eigen::Index positions, int channels)
      : keys_(capacity, RowMatrix<Scalar>::Zero(positions, channels)),
        values_(capacity, RowMatrix<Scalar>::Zero(positions, channels)) {}

  int capacity() const { return static_cast<int>(keys_.size()); }
  int size() const { return count_; }

  template <typename KeyExpr, typename ValueExpr>
  void push(const Eigen::MatrixBase<KeyExpr>& keys,
            const Eigen::MatrixBase<ValueExpr>& values) {
    keys_[next_] = keys;
    values_[next_] = values;
    next_ = (next_ + 1) % capacity();
    if (count_ < capacity()) ++count_;
  }

  /// i-th cached frame, oldest first (i = size() - 1 is the newest).
  const RowMatrix<Scalar>& key(int i) const { return keys_[slot(i)]; }
  const RowMatrix<Scalar>& value(int i) const { return values_[slot(i)]; }

  void reset() {
    for (auto& k : keys_) k.setZero();
    for (auto& v : values_) v.setZero();
    next_ = 0;
    count_ = 0;
  }

  std::size_t bytes() const {
    std::size_t total = 0;
    for (const auto& k : keys_) total += sizeof(Scalar) * k.size();
    return 2 * total;
  }

  bool operator==(const KvCache& other) const {
    if (next_ != other.next_ || count_ != other.count_ ||
        keys_.size() != other.keys_.size())
      return false;
    for (std::size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != other.keys_[i] || values_[i] != other.values_[i])
        return false;
    return true;
  }

 private:
  int slot(int i) const {
    return (next_ - count_ + i + capacity()) % capacity();
  }

  std::vector<RowMatrix<Scalar>> keys_;
  std::vector<RowMatrix<Scalar>> values_;
  int next_ = 0;
  int count_ = 0;
};

template <typename Scalar>
struct TimeAttentionScratch {
  RowMatrix<Scalar> qkv;      // [positions x 3C]
  RowMatrix<Scalar> scores;   // [positions x capacity]
  RowMatrix<Scalar> context;  // [positions x C]

  void resize(Eigen::Index positions, int channels, int capacity) {
    qkv.resize(positions, 3 * channels);
    scores.resize(positions, capacity);
    context.resize(positions, channels);
  }
};

/// Streaming time-axis attention: appends this frame's keys/values to the
/// cache, then each frequency position's query attends over that position's
/// cached frames (weights shared across positions).
template <typename Scalar>
void dpt_time_step(const RowMatrix<Scalar>& x, KvCache<Scalar>& cache,
                   const MhsaWeights<Scalar>& w,
                   TimeAttentionScratch<Scalar>& scratch,
                   RowMatrix<Scalar>& out) {
  const int c = w.channels;
  const int d = w.head_dim();
  if (x.cols() != c || out.rows() != x.rows() || out.cols() != c ||
      scratch.scores.cols() < cache.capacity())
    throw Error(ErrorCode::kShape, "dpt_time_step operand shapes");
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(d));
  scratch.qkv.noalias() = x * w.w_qkv_t;
  scratch.qkv.rowwise() += w.b_qkv.transpose();
  cache.push(scratch.qkv.middleCols(c, c), scratch.qkv.rightCols(c));

  const int frames = cache.size();
  const Eigen::Index positions = x.rows();
  for (int h = 0; h < w.heads; ++h) {
    const int off = h * d;
    for (int s = 0; s < frames; ++s) {
      const RowMatrix<Scalar>& keys = cache.key(s);
      for (Eigen::Index f = 0; f < positions; ++f) {
        Scalar dot = 0;
        for (int j = 0; j < d; ++j) dot += scratch.qkv(f, off + j) * keys(f, off + j);
        scratch.scores(f, s) = dot * scale;
      }
    }
    auto active = scratch.scores.leftCols(frames);
    softmax_rows<Scalar>(active);
    scratch.context.middleCols(off, d).setZero();
    for (int s = 0; s < frames; ++s) {
      const RowMatrix<Scalar>& values = cache.value(s);
      for (Eigen::Index f = 0; f < positions; ++f) {
        const Scalar a = scratch.scores(f, s);
        for (int j = 0; j < d; ++j) scratch.context(f, off + j) += a * values(f, off + j);
      }
    }
  }
  out.noalias() = scratch.context * w.w_o_t;
  out.rowwise() += w.b_o.transpose();
}

}  // namespace streamenh
