// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/bench/macs.hpp"

namespace streamenh {

std::uint64_t layer_macs(const LayerSpec& l) {
  using U = std::uint64_t;
  const U fi = l.in.bins, ci = l.in.channels, fo = l.out.bins, co = l.out.channels;
  switch (l.kind) {
    case LayerKind::kConv: return fo * co * U(l.kernel) * U(l.time_kernel) * ci;
    case LayerKind::kDeconv: return fi * ci * U(l.kernel) * U(l.time_kernel) * co;
    case LayerKind::kLinear: return fi * ci * co;
    case LayerKind::kGru: {
      const U h = l.gru_hidden;
      return fi * 3 * h * (ci + h);
    }
    case LayerKind::kFreqBiGru: {
      const U g = l.gru_hidden;
      return 2 * fi * 3 * g * (ci + g);
    }
    case LayerKind::kFreqMhsa: return 4 * fi * ci * ci + 2 * fi * fi * ci;
    case LayerKind::kTimeMhsa: return 4 * fi * ci * ci + 2 * fi * U(l.window) * ci;
    case LayerKind::kBatchNorm:
    case LayerKind::kLayerNorm: return fi * ci;
    case LayerKind::kPrelu:
    case LayerKind::kSkipAdd:
    case LayerKind::kResidualAdd:
    case LayerKind::kMask: return 0;
  }
  return 0;
}

MacReport count_macs(const ModelGraph& graph) {
  MacReport r;
  for (const LayerSpec& l : graph.layers) {
    const std::uint64_t m = layer_macs(l);
    r.layers.push_back({l.name, l.kind, m});
    r.per_frame += m;
  }
  const auto& s = graph.config.stft;
  r.per_second = double(r.per_frame) * s.sample_rate / s.hop_size;
  return r;
}

MacReport count_macs(const ModelConfig& config, bool fused) {
  return count_macs(build_model(config, fused));
}

}  // namespace streamenh
