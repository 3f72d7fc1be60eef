// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "streamenh/runtime/offline.hpp"
#include "streamenh/runtime/session.hpp"

namespace streamenh {

/// Output of one processor run: per-frame output concatenated, plus an
/// optional per-layer trace.
struct RunOutput {
  std::vector<float> stream;
  std::vector<LayerTrace> trace;
};

/// Plays a whole input (a multiple of the hop size) and returns the stream.
using SignalRunner = std::function<RunOutput(std::span<const float>)>;
using SessionFactory = std::function<EnhancerSession()>;

struct CausalityReport {
  bool passed = true;
  int frames = 0;
  std::vector<int> perturb_frames;
  /// First offending perturbation, or -1.
  int perturb_frame = -1;
  /// First output frame before the perturbation that changed, or -1.
  int first_divergent_frame = -1;
  /// First layer (in execution order) whose earlier frames changed, when a
  /// trace is available.
  std::string layer;
  std::string message;
};

/// Perturbs the input from frame p onward for several p and checks that
/// every output frame before p stays bit-identical.
CausalityReport causality_check(const SignalRunner& runner, int hop_size, std::uint64_t seed,
                                int frames = 64);
CausalityReport causality_check(const SessionFactory& factory, std::uint64_t seed, int frames = 64);

SignalRunner streaming_runner(SessionFactory factory);
SignalRunner offline_runner(const Network& network, OfflineOptions options = {});

/// Fault fixture: a stream whose frame t is computed from input frame t + 1,
/// as if its cache were read one frame ahead.
SignalRunner lookahead_runner(SessionFactory factory);

}  // namespace streamenh
