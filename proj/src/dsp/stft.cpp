// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/dsp/stft.hpp"

#include <cmath>
#include <numbers>

namespace streamenh {

void StftConfig::validate() const {
  if (sample_rate <= 0) throw Error(ErrorCode::kConfig, "sample_rate <= 0");
  if (fft_size < 4 || (fft_size & (fft_size - 1)) != 0)
    throw Error(ErrorCode::kConfig, "fft_size must be a power of two");
  if (hop_size <= 0 || fft_size != 2 * hop_size)
    throw Error(ErrorCode::kConfig, "fft_size must equal 2 * hop_size");
}

int latency_samples(const StftConfig& cfg) {
  cfg.validate();
  return cfg.fft_size - cfg.hop_size;
}

Vector<float> hann_window(int n) {
  Vector<float> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = static_cast<float>(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n));
  return w;
}

Vector<float> synthesis_window(const Vector<float>& analysis, int hop_size) {
  const int n = static_cast<int>(analysis.size());
  Vector<float> out(n);
  for (int i = 0; i < n; ++i) {
    double norm = 0.0;
    for (int j = i % hop_size; j < n; j += hop_size)
      norm += double(analysis[j]) * analysis[j];
    out[i] = static_cast<float>(analysis[i] / norm);
  }
  return out;
}

void StftState::reset() {
  history.setZero();
  ola.setZero();
  frame.setZero();
}

Stft::Stft(const StftConfig& cfg)
    : cfg_((cfg.validate(), cfg)),
      fft_(cfg.fft_size),
      analysis_(hann_window(cfg.fft_size)),
      synthesis_(streamenh::synthesis_window(analysis_, cfg.hop_size)) {}

StftState Stft::make_state() const {
  StftState s;
  s.history = Vector<float>::Zero(cfg_.fft_size - cfg_.hop_size);
  s.ola = Vector<float>::Zero(cfg_.fft_size);
  s.frame = Vector<float>::Zero(cfg_.fft_size);
  return s;
}

void Stft::transform(std::span<const float> frame, ComplexSpectrum& out,
                     std::span<float> scratch) const {
  const int n = cfg_.fft_size;
  if (static_cast<int>(frame.size()) != n ||
      static_cast<int>(scratch.size()) != n)
    throw Error(ErrorCode::kInputSize, "frame must hold fft_size samples");
  for (int i = 0; i < n; ++i) scratch[i] = frame[i] * analysis_[i];
  if (out.size() != cfg_.bins()) out.resize(cfg_.bins());
  fft_.forward(scratch, std::span<std::complex<float>>(out.data(), out.size()));
}

void Stft::analyze_frame(StftState& state, std::span<const float> samples,
                         ComplexSpectrum& out) const {
  const int hop = cfg_.hop_size;
  const int keep = cfg_.fft_size - hop;
  if (static_cast<int>(samples.size()) != hop)
    throw Error(ErrorCode::kInputSize,
                "expected " + std::to_string(hop) + " samples, got " +
                    std::to_string(samples.size()));
  for (int i = 0; i < keep; ++i)
    state.frame[i] = state.history[i] * analysis_[i];
  for (int i = 0; i < hop; ++i)
    state.frame[keep + i] = samples[i] * analysis_[keep + i];
  // history <- last `keep` samples of (history ++ samples)
  if (keep > hop)
    for (int i = 0; i < keep - hop; ++i) state.history[i] = state.history[i + hop];
  for (int i = 0; i < hop; ++i) state.history[keep - hop + i] = samples[i];
  if (out.size() != cfg_.bins()) out.resize(cfg_.bins());
  fft_.forward(std::span<const float>(state.frame.data(), state.frame.size()),
               std::span<std::complex<float>>(out.data(), out.size()));
}

ComplexSpectrum Stft::analyze_frame(StftState& state,
                                    std::span<const float> samples) const {
  ComplexSpectrum out(cfg_.bins());
  analyze_frame(state, samples, out);
  return out;
}

void Stft::inverse_windowed(const ComplexSpectrum& spectrum,
                            std::span<float> out) const {
  if (spectrum.size() != cfg_.bins())
    throw Error(ErrorCode::kInputSize, "spectrum must hold fft_size/2+1 bins");
  if (!spectrum.allFinite())
    throw Error(ErrorCode::kNumeric, "non-finite spectrum value");
  fft_.inverse(std::span<const std::complex<float>>(spectrum.data(), spectrum.size()),
               out);
  for (int i = 0; i < cfg_.fft_size; ++i) out[i] *= synthesis_[i];
}

void Stft::synthesize_frame(StftState& state, const ComplexSpectrum& spectrum,
                            std::span<float> out) const {
  const int hop = cfg_.hop_size;
  const int n = cfg_.fft_size;
  if (static_cast<int>(out.size()) != hop)
    throw Error(ErrorCode::kInputSize, "output must hold hop_size samples");
  inverse_windowed(spectrum, std::span<float>(state.frame.data(), n));
  state.ola += state.frame;
  for (int i = 0; i < hop; ++i) out[i] = state.ola[i];
  for (int i = 0; i < n - hop; ++i) state.ola[i] = state.ola[i + hop];
  for (int i = n - hop; i < n; ++i) state.ola[i] = 0.0f;
}

}  // namespace streamenh
