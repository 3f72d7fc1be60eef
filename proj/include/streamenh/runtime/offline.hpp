// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <vector>

#include "streamenh/model/network.hpp"

namespace streamenh {

/// Activations of one layer for every frame.
struct LayerTrace {
  std::string layer;
  std::vector<FeatureMap> frames;
};

struct OfflineOptions {
  bool record_trace = false;
  /// Fault fixture: the network input of frame t also sees frame t + 1.
  bool peek_next_frame = false;
};

struct OfflineResult {
  /// Same convention as a session's concatenated per-frame output: sample m
  /// is the enhanced signal at time m - latency.
  std::vector<float> stream;
  std::vector<LayerTrace> trace;
};

/// Whole-signal, layer-major evaluation: every layer runs over all frames
/// before the next starts. Recurrences are unrolled over time, time
/// attention uses a band mask over the full sequence, and synthesis is one
/// overlap-add over the whole signal. `samples` length must be a multiple
/// of the hop size.
OfflineResult run_offline(const Network& network, std::span<const float> samples,
                          const OfflineOptions& options = {});

/// Latency-compensated offline enhancement: returns samples.size() values
/// aligned with the input.
std::vector<float> process_offline(const Network& network, std::span<const float> samples);

}  // namespace streamenh
