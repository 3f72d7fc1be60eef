// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/runtime/offline.hpp"

#include <algorithm>
#include <cmath>

namespace streamenh {
namespace {

using Sequence = std::vector<FeatureMap>;

class Recorder {
 public:
  explicit Recorder(bool enabled, std::vector<LayerTrace>& out) : enabled_(enabled), out_(out) {}
  void operator()(const std::string& layer, const Sequence& frames) {
    if (enabled_) out_.push_back({layer, frames});
  }

 private:
  bool enabled_;
  std::vector<LayerTrace>& out_;
};

// Causal convolution along time, any frequency stride: frame t sees frames
// t - tk + 1 .. t, zero before the start.
Sequence conv_stage(const ConvStage& s, const Sequence& in) {
  const int tk = s.time_kernel();
  Sequence out(in.size());
  FeatureMap cols(s.transposed ? s.in_bins : s.out_bins,
                  s.kernel * (s.transposed ? s.out_channels : s.in_channels));
  for (std::size_t t = 0; t < in.size(); ++t) {
    FeatureMap y(s.out_bins, s.out_channels);
    y.rowwise() = s.bias.transpose();
    for (int tau = 0; tau < tk; ++tau) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) - (tk - 1 - tau);
      if (src < 0) continue;
      if (s.transposed)
        deconv_freq_accumulate(in[src], s.taps[tau], s.kernel, s.stride, s.padding, cols, y);
      else
        conv_freq_accumulate(in[src], s.taps[tau], s.kernel, s.stride, s.padding, cols, y);
    }
    s.norm.apply(y);
    prelu_inplace(y, s.slope);
    out[t] = std::move(y);
  }
  return out;
}

Sequence pointwise(const LinearWeights<float>& w, const Sequence& in) {
  Sequence out(in.size());
  for (std::size_t t = 0; t < in.size(); ++t) {
    out[t].resize(in[t].rows(), w.out_features);
    linear(in[t], w, out[t]);
  }
  return out;
}

Sequence normed(const NormOp& norm, const Sequence& in) {
  Sequence out = in;
  for (auto& f : out) norm.apply(f);
  return out;
}

// Per-position GRU unrolled across the frame sequence.
Sequence gru_time(const BlockOp& b, const Sequence& x) {
  const Eigen::Index positions = x.front().rows();
  FeatureMap h = FeatureMap::Zero(positions, b.gru.hidden_size);
  GruScratch<float> scratch;
  scratch.resize(positions, b.gru.hidden_size);
  Sequence out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    gru_step(x[t], h, b.gru, scratch);
    out[t].resize(positions, b.time_proj.out_features);
    linear(h, b.time_proj, out[t]);
  }
  return out;
}

// Time attention with a causal band mask of `window` frames, computed from
// the full key/value sequence.
Sequence banded_time_attention(const MhsaWeights<float>& w, int window, const Sequence& x) {
  const int c = w.channels;
  const int d = w.head_dim();
  const float scale = 1.0f / std::sqrt(static_cast<float>(d));
  const std::size_t frames = x.size();
  const Eigen::Index positions = x.front().rows();
  Sequence qkv(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    qkv[t] = x[t] * w.w_qkv_t;
    qkv[t].rowwise() += w.b_qkv.transpose();
  }
  Sequence out(frames);
  std::vector<float> scores;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t first = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - window : 0;
    FeatureMap context = FeatureMap::Zero(positions, c);
    for (Eigen::Index p = 0; p < positions; ++p) {
      for (int h = 0; h < w.heads; ++h) {
        scores.assign(t - first + 1, 0.0f);
        for (std::size_t s = first; s <= t; ++s)
          scores[s - first] = scale * qkv[t].row(p).segment(h * d, d).dot(
                                          qkv[s].row(p).segment(c + h * d, d));
        const float peak = *std::max_element(scores.begin(), scores.end());
        float total = 0;
        for (float& v : scores) total += (v = std::exp(v - peak));
        for (std::size_t s = first; s <= t; ++s)
          context.row(p).segment(h * d, d) +=
              (scores[s - first] / total) * qkv[s].row(p).segment(2 * c + h * d, d);
      }
    }
    out[t] = context * w.w_o_t;
    out[t].rowwise() += w.b_o.transpose();
  }
  return out;
}

Sequence freq_branch(const BlockOp& b, const Sequence& x) {
  Sequence out(x.size());
  const Eigen::Index positions = x.front().rows();
  if (b.kind == BlockKind::kDprnn) {
    BiGruScratch<float> s;
    s.resize(positions, b.freq_gru.forward.hidden_size);
    for (std::size_t t = 0; t < x.size(); ++t) {
      out[t].resize(positions, b.freq_gru.proj.out_features);
      dprnn_freq_step(x[t], b.freq_gru, s, out[t]);
    }
  } else {
    MhsaScratch<float> s;
    s.resize(positions, b.freq_attention.channels);
    for (std::size_t t = 0; t < x.size(); ++t) {
      out[t].resize(positions, b.freq_attention.channels);
      mhsa_freq(x[t], b.freq_attention, s, out[t]);
    }
  }
  return out;
}

void add_into(Sequence& acc, const Sequence& x) {
  for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += x[t];
}

}  // namespace

OfflineResult run_offline(const Network& network, std::span<const float> samples,
                          const OfflineOptions& options) {
  const StftConfig& sc = network.config().stft;
  const int hop = sc.hop_size;
  const int fft = sc.fft_size;
  const int latency = latency_samples(sc);
  if (samples.size() % hop != 0)
    throw Error(ErrorCode::kInputSize, "offline input length must be a multiple of the hop size");
  const std::size_t frames = samples.size() / hop;
  OfflineResult result;
  if (frames == 0) return result;
  Recorder record(options.record_trace, result.trace);
  const Stft& stft = network.stft();

  // Frame t covers signal samples [t * hop - latency, t * hop - latency + fft).
  std::vector<ComplexSpectrum> spectra(frames);
  std::vector<float> frame(fft), scratch(fft);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int k = 0; k < fft; ++k) {
      const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t * hop) - latency + k;
      frame[k] = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(samples.size())) ? samples[idx] : 0.0f;
    }
    spectra[t].resize(sc.bins());
    stft.transform(frame, spectra[t], scratch);
  }

  Sequence x(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    x[t].resize(sc.bins(), 2);
    featurize(spectra[t], x[t]);
  }
  if (options.peek_next_frame)
    for (std::size_t t = 0; t + 1 < frames; ++t) x[t] += x[t + 1];
  record("input", x);

  std::vector<Sequence> skips;
  for (const auto& e : network.encoders()) {
    x = conv_stage(e, x);
    record(e.name, x);
    skips.push_back(x);
  }

  if (!network.blocks().empty()) {
    if (network.proj_in()) {
      x = pointwise(*network.proj_in(), x);
      record("proj_in", x);
    }
    for (std::size_t b = 0; b < network.blocks().size(); ++b) {
      const BlockOp& blk = network.blocks()[b];
      const Sequence tin = normed(blk.time_norm, x);
      if (blk.kind == BlockKind::kDpt)
        add_into(x, banded_time_attention(blk.time_attention, blk.window, tin));
      else
        add_into(x, gru_time(blk, tin));
      add_into(x, freq_branch(blk, normed(blk.freq_norm, x)));
      record("block" + std::to_string(b), x);
    }
    if (network.proj_out()) {
      x = pointwise(*network.proj_out(), x);
      record("proj_out", x);
    }
  }

  const std::size_t n = skips.size();
  for (std::size_t j = 0; j < network.decoders().size(); ++j) {
    const ConvStage& d = network.decoders()[j];
    add_into(x, skips[n - 1 - j]);
    x = conv_stage(d, x);
    record(d.name, x);
  }

  x = pointwise(network.head(), x);
  record("head", x);

  // Whole-signal overlap-add; index m holds signal time m - latency.
  std::vector<float> ola(frames * hop + fft, 0.0f);
  std::vector<float> time(fft);
  MaskFrame mask(sc.bins());
  ComplexSpectrum masked(sc.bins());
  for (std::size_t t = 0; t < frames; ++t) {
    bound_mask(x[t], mask);
    apply_mask(spectra[t], mask, masked);
    stft.inverse_windowed(masked, time);
    for (int k = 0; k < fft; ++k) ola[t * hop + k] += time[k];
  }
  ola.resize(frames * hop);
  result.stream = std::move(ola);
  return result;
}

std::vector<float> process_offline(const Network& network, std::span<const float> samples) {
  const std::size_t hop = network.config().stft.hop_size;
  const std::size_t latency = latency_samples(network.config().stft);
  const std::size_t n = samples.size();
  if (n == 0) return {};
  const std::size_t frames = (n + hop - 1) / hop + (latency + hop - 1) / hop;
  std::vector<float> padded(frames * hop, 0.0f);
  std::copy(samples.begin(), samples.end(), padded.begin());
  for (float v : samples)
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "non-finite input sample");
  const auto r = run_offline(network, padded);
  return std::vector<float>(r.stream.begin() + latency, r.stream.begin() + latency + n);
}

}  // namespace streamenh
