// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamenh/model/graph.hpp"

namespace streamenh {

struct LayerMacs {
  std::string layer;
  LayerKind kind;
  std::uint64_t macs = 0;
};

/// Multiply-accumulates of one network evaluation per frame and per second
/// of audio. STFT, activations, additions and the mask are not counted;
/// each norm counts one MAC per element.
struct MacReport {
  std::vector<LayerMacs> layers;
  std::uint64_t per_frame = 0;
  double per_second = 0;
};

std::uint64_t layer_macs(const LayerSpec& layer);
MacReport count_macs(const ModelGraph& graph);
MacReport count_macs(const ModelConfig& config, bool fused = true);

}  // namespace streamenh
