// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>

#include "streamenh/common.hpp"
#include "streamenh/dsp/fft.hpp"

namespace streamenh {

/// Analysis/synthesis geometry. The engine runs at 16 kHz with 512-sample
/// frames advanced by 256 samples (16 ms per frame).
struct StftConfig {
  int sample_rate = 16000;
  int fft_size = 512;
  int hop_size = 256;

  int bins() const { return fft_size / 2 + 1; }
  void validate() const;
  bool operator==(const StftConfig&) const = default;
};

/// Algorithmic delay of the analysis/synthesis chain: fft_size - hop_size.
int latency_samples(const StftConfig& cfg);

/// Periodic Hann window of length n.
Vector<float> hann_window(int n);

/// Least-squares synthesis window: w_a / sum_shifts(w_a^2). Paired with the
/// analysis window it sums to exactly one over every hop-shifted overlap.
Vector<float> synthesis_window(const Vector<float>& analysis, int hop_size);

/// Per-stream sample memory of the analysis/synthesis chain.
struct StftState {
  Vector<float> history;  // last fft_size - hop_size input samples
  Vector<float> ola;      // overlap-add accumulator, fft_size samples
  Vector<float> frame;    // scratch, fft_size samples

  void reset();
};

class Stft {
 public:
  explicit Stft(const StftConfig& cfg = {});

  const StftConfig& config() const { return cfg_; }
  const Vector<float>& analysis_window() const { return analysis_; }
  const Vector<float>& synthesis_window() const { return synthesis_; }

  StftState make_state() const;

  /// Appends hop_size samples to the history and returns the spectrum of the
  /// windowed fft_size-sample frame ending with them.
  void analyze_frame(StftState& state, std::span<const float> samples,
                     ComplexSpectrum& out) const;
  ComplexSpectrum analyze_frame(StftState& state,
                                std::span<const float> samples) const;

  /// Overlap-adds the synthesis-windowed inverse transform and emits the
  /// oldest hop_size fully accumulated samples.
  void synthesize_frame(StftState& state, const ComplexSpectrum& spectrum,
                        std::span<float> out) const;

  /// Spectrum of an explicit fft_size-sample frame (no state).
  void transform(std::span<const float> frame, ComplexSpectrum& out,
                 std::span<float> scratch) const;
  /// Synthesis-windowed inverse transform of one frame (no state).
  void inverse_windowed(const ComplexSpectrum& spectrum,
                        std::span<float> out) const;

 private:
  StftConfig cfg_;
  RealFft<float> fft_;
  Vector<float> analysis_;
  Vector<float> synthesis_;
};

}  // namespace streamenh
