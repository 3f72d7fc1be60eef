// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamenh/model/config.hpp"

namespace streamenh {

/// One suite run on one subject (a preset/variant pair or a DSP setup).
struct SuiteCase {
  std::string suite;
  std::string subject;
  bool passed = false;
  double value = 0;      // measured error, or violation count
  double threshold = 0;  // pass iff value < threshold
  std::string detail;
};

enum class CausalityFixture { kNone, kLookaheadStream, kPeekingOffline };

/// Max abs difference between streamed and offline output on seeded noise
/// with seeded random weights.
SuiteCase streaming_offline_case(const ModelConfig& config, std::uint64_t seed, double seconds,
                                 double tolerance = 1e-4);

/// Perturbation check of the streaming session and of the offline path,
/// or of a deliberately non-causal fixture.
SuiteCase causality_case(const ModelConfig& config, std::uint64_t seed, int frames,
                         CausalityFixture fixture = CausalityFixture::kNone);

/// Fused against unfused output, plus fewer layers and fewer MACs after
/// fusion. Only meaningful for configs with batch norms.
SuiteCase fusion_case(const ModelConfig& config, std::uint64_t seed, double seconds,
                      double tolerance = 1e-4);

/// Unit-mask STFT round trip, relative RMS error after the latency shift.
SuiteCase cola_case(double seconds, std::uint64_t seed, double tolerance = 1e-6);

struct SelftestOptions {
  std::uint64_t seed = 1;
  double seconds = 3.0;
  double cola_seconds = 10.0;
  int causality_frames = 24;
  std::vector<std::string> presets = preset_names();
  std::vector<std::string> variants = variant_names();
  CausalityFixture causality_fixture = CausalityFixture::kNone;
};

struct SelftestReport {
  std::vector<SuiteCase> cases;
  bool passed() const;
  /// One line per case, then one line per suite.
  std::string format() const;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace streamenh
