// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "streamenh/common.hpp"
#include "streamenh/kernels/conv.hpp"

namespace streamenh {

/// Previous time_kernel - 1 input frames of one convolution, oldest first.
template <typename Scalar>
class TimeConvCache {
 public:
  TimeConvCache() = default;
  TimeConvCache(int time_kernel, Eigen::Index bins, Eigen::Index channels)
      : frames_(time_kernel - 1, RowMatrix<Scalar>::Zero(bins, channels)) {}

  int length() const { return static_cast<int>(frames_.size()); }
  const RowMatrix<Scalar>& frame(int i) const { return frames_[i]; }

  void push(const RowMatrix<Scalar>& x) {
    if (frames_.empty()) return;
    for (std::size_t i = 0; i + 1 < frames_.size(); ++i)
      frames_[i].swap(frames_[i + 1]);
    frames_.back() = x;
  }

  void reset() {
    for (auto& f : frames_) f.setZero();
  }

  std::size_t bytes() const {
    std::size_t total = 0;
    for (const auto& f : frames_) total += sizeof(Scalar) * f.size();
    return total;
  }

  bool operator==(const TimeConvCache& other) const {
    return frames_ == other.frames_;
  }

 private:
  std::vector<RowMatrix<Scalar>> frames_;
};

/// Causal time x frequency convolution. `taps[i]` applies to frame
/// t - (taps.size() - 1 - i), so the last tap sees the current frame.
/// Pushes x into the cache afterwards.
template <typename Scalar>
void timeconv3_step(const RowMatrix<Scalar>& x, TimeConvCache<Scalar>& cache,
                    const std::vector<RowMatrix<Scalar>>& taps,
                    const Vector<Scalar>& bias, int kernel, int stride,
                    int padding, RowMatrix<Scalar>& cols,
                    RowMatrix<Scalar>& out) {
  const int time_kernel = static_cast<int>(taps.size());
  if (cache.length() != time_kernel - 1)
    throw Error(ErrorCode::kShape, "time conv cache length");
  out.rowwise() = bias.transpose();
  for (int i = 0; i < time_kernel - 1; ++i)
    conv_freq_accumulate(cache.frame(i), taps[i], kernel, stride, padding, cols, out);
  conv_freq_accumulate(x, taps.back(), kernel, stride, padding, cols, out);
  cache.push(x);
}

/// Transposed-convolution counterpart; taps are [in x (kernel * out)].
template <typename Scalar>
void timedeconv3_step(const RowMatrix<Scalar>& x, TimeConvCache<Scalar>& cache,
                      const std::vector<RowMatrix<Scalar>>& taps,
                      const Vector<Scalar>& bias, int kernel, int stride,
                      int padding, RowMatrix<Scalar>& products,
                      RowMatrix<Scalar>& out) {
  const int time_kernel = static_cast<int>(taps.size());
  if (cache.length() != time_kernel - 1)
    throw Error(ErrorCode::kShape, "time conv cache length");
  out.rowwise() = bias.transpose();
  for (int i = 0; i < time_kernel - 1; ++i)
    deconv_freq_accumulate(cache.frame(i), taps[i], kernel, stride, padding,
                           products, out);
  deconv_freq_accumulate(x, taps.back(), kernel, stride, padding, products, out);
  cache.push(x);
}

}  // namespace streamenh
