// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "streamenh/model/network.hpp"

namespace streamenh {

struct RtfReport {
  std::string preset;
  std::string variant;
  std::int64_t frames = 0;  // timed frames per stream, warmup excluded
  std::int64_t warmup_frames = 0;
  double mean_us = 0;
  double p50_us = 0;
  double p90_us = 0;
  double p99_us = 0;
  /// Processing time / audio duration, averaged over streams.
  double rtf = 0;
  int threads = 1;
};

struct RtfOptions {
  double seconds = 10.0;  // timed audio per stream
  double warmup_seconds = 1.0;
  /// Independent concurrent streams sharing one network.
  int threads = 1;
  std::uint64_t seed = 0;
};

/// Streams seeded random audio through EnhancerSession::process_frame and
/// times every call. Needs seconds >= 5, warmup >= 1 s and fused weights
/// (Error kConfig otherwise).
RtfReport measure_rtf(std::shared_ptr<const Network> network, const RtfOptions& options = {});

/// Enhanced outputs of `threads` concurrent streams fed the same seeded audio;
/// used to check that concurrency does not change results.
std::vector<std::vector<float>> concurrent_outputs(std::shared_ptr<const Network> network,
                                                   int threads, int frames, std::uint64_t seed);

}  // namespace streamenh
