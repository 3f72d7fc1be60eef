// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/io/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace streamenh {
namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Portable across standard libraries, unlike std::uniform_real_distribution.
float uniform(std::mt19937_64& rng, float lo, float hi) {
  const double u = double(rng() >> 11) * 0x1.0p-53;
  return float(lo + (hi - lo) * u);
}

// Inputs feeding one output element of a weight matrix; 0 for vectors.
std::size_t fan_in(const LayerSpec& layer, const ParamSpec& p) {
  if (p.shape.size() < 2) return 0;
  const std::size_t numel = p.size();
  if (layer.kind == LayerKind::kDeconv) return numel / p.shape[p.shape.size() - 2];
  if (layer.kind == LayerKind::kConv) return numel / p.shape.back();
  return p.shape.back();
}

// Output projections of residual branches.
bool feeds_residual(const LayerSpec& layer, const ParamSpec& p) {
  const bool proj = layer.name.ends_with(".time_proj") || layer.name.ends_with(".freq_proj");
  const bool attn = layer.kind == LayerKind::kFreqMhsa || layer.kind == LayerKind::kTimeMhsa;
  return (proj && p.name.ends_with(".weight")) || (attn && p.name.ends_with(".w_o"));
}

}  // namespace

WeightBundle random_weights(const ModelGraph& graph, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightBundle bundle;
  bundle.set_config(graph.config);
  bundle.set_fused(graph.fused);
  for (const LayerSpec& layer : graph.layers) {
    for (const ParamSpec& p : layer.params) {
      Tensor t = Tensor::zeros(p.shape);
      float lo = -0.3f, hi = 0.3f, offset = 0.0f;
      if (const std::size_t fan = fan_in(layer, p)) {
        hi = std::min(hi, float(std::sqrt(3.0 / double(fan))));
        if (feeds_residual(layer, p))
          hi /= float(std::sqrt(2.0 * std::max(1, graph.config.n_blocks)));
        lo = -hi;
      }
      if (ends_with(p.name, ".running_mean")) {
        lo = -0.1f;
        hi = 0.1f;
      } else if (ends_with(p.name, ".running_var")) {
        lo = 0.5f;
        hi = 1.5f;
      } else if (ends_with(p.name, ".gamma")) {
        offset = 1.0f;
      }
      for (float& v : t.data) v = offset + uniform(rng, lo, hi);
      bundle.add(p.name, std::move(t));
    }
  }
  return bundle;
}

WeightBundle random_weights(const ModelConfig& config, std::uint64_t seed) {
  return random_weights(build_model(config), seed);
}

}  // namespace streamenh
