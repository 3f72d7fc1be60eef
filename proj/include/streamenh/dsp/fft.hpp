// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "streamenh/common.hpp"

namespace streamenh {

/// Radix-2 real FFT. The n-point real transform runs as an n/2-point complex
/// transform over even/odd-interleaved samples followed by a split pass.
/// Plans are immutable after construction; all work happens in the caller's
/// output buffer, so one plan may be shared across threads.
template <typename Scalar>
class RealFft {
 public:
  using Complex = std::complex<Scalar>;

  explicit RealFft(int size) : size_(size), half_(size / 2) {
    if (size < 4 || (size & (size - 1)) != 0)
      throw Error(ErrorCode::kConfig, "fft size must be a power of two >= 4");
    twiddles_.resize(half_);
    for (int k = 0; k < half_; ++k) {
      double angle = -2.0 * std::numbers::pi * k / half_;
      twiddles_[k] = Complex(Scalar(std::cos(angle)), Scalar(std::sin(angle)));
    }
    split_.resize(half_ + 1);
    for (int k = 0; k <= half_; ++k) {
      double angle = -2.0 * std::numbers::pi * k / size_;
      split_[k] = Complex(Scalar(std::cos(angle)), Scalar(std::sin(angle)));
    }
    bitrev_.resize(half_);
    int bits = 0;
    while ((1 << bits) < half_) ++bits;
    for (int i = 0; i < half_; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b)
        if (i & (1 << b)) r |= 1 << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }

  int size() const { return size_; }
  int bins() const { return half_ + 1; }

  /// out[k] = sum_n in[n] exp(-2 pi i k n / size), k = 0..size/2.
  void forward(std::span<const Scalar> in, std::span<Complex> out) const {
    if (static_cast<int>(in.size()) != size_ ||
        static_cast<int>(out.size()) != half_ + 1)
      throw Error(ErrorCode::kInputSize, "real fft buffer size");
    for (int m = 0; m < half_; ++m)
      out[bitrev_[m]] = Complex(in[2 * m], in[2 * m + 1]);
    butterflies(out.first(half_));

    const Complex z0 = out[0];
    out[0] = Complex(z0.real() + z0.imag(), 0);
    out[half_] = Complex(z0.real() - z0.imag(), 0);
    const Complex minus_i(0, -1);
    for (int k = 1; k <= half_ / 2; ++k) {
      const Complex a = out[k];
      const Complex b = out[half_ - k];
      const Complex even = (a + std::conj(b)) * Scalar(0.5);
      const Complex odd = minus_i * (a - std::conj(b)) * Scalar(0.5);
      const Complex rotated = split_[k] * odd;
      out[k] = even + rotated;
      out[half_ - k] = std::conj(even - rotated);
    }
  }

  /// Inverse of forward(), including the 1/size normalization. Imaginary
  /// parts of the DC and Nyquist bins are ignored.
  void inverse(std::span<const Complex> in, std::span<Scalar> out) const {
    if (static_cast<int>(in.size()) != half_ + 1 ||
        static_cast<int>(out.size()) != size_)
      throw Error(ErrorCode::kInputSize, "inverse fft buffer size");
    // std::complex guarantees array-compatible layout, so the real output
    // doubles as the half-size complex work buffer.
    Complex* work = reinterpret_cast<Complex*>(out.data());
    const Complex i_unit(0, 1);
    for (int k = 0; k < half_; ++k) {
      const Complex a = in[k];
      const Complex b = std::conj(in[half_ - k]);
      const Complex even = (a + b) * Scalar(0.5);
      const Complex odd = (a - b) * std::conj(split_[k]) * Scalar(0.5);
      // Conjugated input: the forward butterflies then compute the inverse.
      work[bitrev_[k]] = std::conj(even + i_unit * odd);
    }
    std::span<Complex> view(work, half_);
    butterflies(view);
    const Scalar scale = Scalar(1) / Scalar(half_);
    for (int k = 0; k < half_; ++k) work[k] = std::conj(work[k]) * scale;
  }

 private:
  // In-place iterative decimation-in-time on bit-reversed input.
  void butterflies(std::span<Complex> data) const {
    for (int len = 2; len <= half_; len <<= 1) {
      const int stride = half_ / len;
      const int half_len = len / 2;
      for (int start = 0; start < half_; start += len) {
        for (int j = 0; j < half_len; ++j) {
          const Complex t = twiddles_[j * stride] * data[start + j + half_len];
          const Complex u = data[start + j];
          data[start + j] = u + t;
          data[start + j + half_len] = u - t;
        }
      }
    }
  }

  int size_;
  int half_;
  std::vector<Complex> twiddles_;
  std::vector<Complex> split_;
  std::vector<int> bitrev_;
};

}  // namespace streamenh
