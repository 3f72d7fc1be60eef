// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>

#include "streamenh/common.hpp"

namespace streamenh {

inline int conv_output_size(int in, int kernel, int stride, int padding) {
  return (in + 2 * padding - kernel) / stride + 1;
}

/// Smallest transposed-convolution output; a target size may exceed it by up
/// to stride - 1 (trailing rows that only receive the bias).
inline int deconv_output_size(int in, int kernel, int stride, int padding) {
  return (in - 1) * stride + kernel - 2 * padding;
}

/// Frequency-axis convolution weights. `weight` is the [kernel x in x out]
/// tensor viewed as a (kernel * in) x out matrix, so one im2col GEMM covers
/// every tap.
template <typename Scalar>
struct ConvWeights {
  int kernel = 1;
  int in_channels = 0;
  int out_channels = 0;
  RowMatrix<Scalar> weight;
  Vector<Scalar> bias;

  /// `data` is row-major [kernel x in x out].
  static ConvWeights from_tensor(std::span<const float> data,
                                 std::span<const float> bias, int kernel,
                                 int in_channels, int out_channels) {
    ConvWeights w;
    w.kernel = kernel;
    w.in_channels = in_channels;
    w.out_channels = out_channels;
    w.weight = Eigen::Map<const RowMatrix<float>>(
                   data.data(), kernel * in_channels, out_channels)
                   .template cast<Scalar>();
    w.bias = Eigen::Map<const Vector<float>>(bias.data(), out_channels)
                 .template cast<Scalar>();
    return w;
  }
};

/// Transposed-convolution weights from the [kernel x out x in] tensor, stored
/// as in x (kernel * out) so one GEMM produces all tap contributions before
/// the scatter-add.
template <typename Scalar>
struct DeconvWeights {
  int kernel = 1;
  int in_channels = 0;
  int out_channels = 0;
  RowMatrix<Scalar> weight;
  Vector<Scalar> bias;

  static DeconvWeights from_tensor(std::span<const float> data,
                                   std::span<const float> bias, int kernel,
                                   int in_channels, int out_channels) {
    DeconvWeights w;
    w.kernel = kernel;
    w.in_channels = in_channels;
    w.out_channels = out_channels;
    w.weight = Eigen::Map<const RowMatrix<float>>(
                   data.data(), kernel * out_channels, in_channels)
                   .transpose()
                   .template cast<Scalar>();
    w.bias = Eigen::Map<const Vector<float>>(bias.data(), out_channels)
                 .template cast<Scalar>();
    return w;
  }
};

/// out += cross-correlation of x with `weight` (no bias). `cols` is the
/// im2col scratch; both it and `out` must already have their final sizes.
template <typename Scalar>
void conv_freq_accumulate(const RowMatrix<Scalar>& x,
                          const RowMatrix<Scalar>& weight, int kernel,
                          int stride, int padding, RowMatrix<Scalar>& cols,
                          RowMatrix<Scalar>& out) {
  const Eigen::Index in_bins = x.rows();
  const Eigen::Index in_ch = x.cols();
  const Eigen::Index out_bins = out.rows();
  if (weight.rows() != kernel * in_ch || weight.cols() != out.cols() ||
      cols.rows() != out_bins || cols.cols() != kernel * in_ch)
    throw Error(ErrorCode::kShape, "conv_freq operand shapes");
  for (Eigen::Index f = 0; f < out_bins; ++f) {
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index src = f * stride + k - padding;
      if (src >= 0 && src < in_bins)
        cols.row(f).segment(k * in_ch, in_ch) = x.row(src);
      else
        cols.row(f).segment(k * in_ch, in_ch).setZero();
    }
  }
  out.noalias() += cols * weight;
}

template <typename Scalar>
void conv_freq(const RowMatrix<Scalar>& x, const ConvWeights<Scalar>& w,
               int stride, int padding, RowMatrix<Scalar>& cols,
               RowMatrix<Scalar>& out) {
  if (x.cols() != w.in_channels)
    throw Error(ErrorCode::kShape, "conv_freq input channels");
  out.rowwise() = w.bias.transpose();
  conv_freq_accumulate(x, w.weight, w.kernel, stride, padding, cols, out);
}

/// Allocating convenience form.
template <typename Scalar>
RowMatrix<Scalar> conv_freq(const RowMatrix<Scalar>& x,
                            const ConvWeights<Scalar>& w, int stride,
                            int padding) {
  const int out_bins =
      conv_output_size(static_cast<int>(x.rows()), w.kernel, stride, padding);
  if (out_bins < 1) throw Error(ErrorCode::kShape, "conv_freq output < 1 bin");
  RowMatrix<Scalar> cols(out_bins, w.kernel * x.cols());
  RowMatrix<Scalar> out(out_bins, w.out_channels);
  conv_freq(x, w, stride, padding, cols, out);
  return out;
}

/// out += transposed convolution of x (no bias). Output row f * stride + k -
/// padding receives tap k of input row f. `products` is x * weight scratch.
template <typename Scalar>
void deconv_freq_accumulate(const RowMatrix<Scalar>& x,
                            const RowMatrix<Scalar>& weight, int kernel,
                            int stride, int padding,
                            RowMatrix<Scalar>& products,
                            RowMatrix<Scalar>& out) {
  const Eigen::Index out_ch = out.cols();
  if (weight.rows() != x.cols() || weight.cols() != kernel * out_ch ||
      products.rows() != x.rows() || products.cols() != weight.cols())
    throw Error(ErrorCode::kShape, "deconv_freq operand shapes");
  products.noalias() = x * weight;
  const Eigen::Index out_bins = out.rows();
  for (Eigen::Index f = 0; f < x.rows(); ++f) {
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index dst = f * stride + k - padding;
      if (dst >= 0 && dst < out_bins)
        out.row(dst) += products.row(f).segment(k * out_ch, out_ch);
    }
  }
}

template <typename Scalar>
void deconv_freq(const RowMatrix<Scalar>& x, const DeconvWeights<Scalar>& w,
                 int stride, int padding, RowMatrix<Scalar>& products,
                 RowMatrix<Scalar>& out) {
  if (x.cols() != w.in_channels)
    throw Error(ErrorCode::kShape, "deconv_freq input channels");
  out.rowwise() = w.bias.transpose();
  deconv_freq_accumulate(x, w.weight, w.kernel, stride, padding, products, out);
}

template <typename Scalar>
RowMatrix<Scalar> deconv_freq(const RowMatrix<Scalar>& x,
                              const DeconvWeights<Scalar>& w, int stride,
                              int padding, int out_bins) {
  const int min_bins =
      deconv_output_size(static_cast<int>(x.rows()), w.kernel, stride, padding);
  if (out_bins < min_bins || out_bins > min_bins + stride - 1 || out_bins < 1)
    throw Error(ErrorCode::kShape, "deconv_freq output size");
  RowMatrix<Scalar> products(x.rows(), w.kernel * w.out_channels);
  RowMatrix<Scalar> out(out_bins, w.out_channels);
  deconv_freq(x, w, stride, padding, products, out);
  return out;
}

}  // namespace streamenh
