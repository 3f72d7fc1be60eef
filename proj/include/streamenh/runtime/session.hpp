// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "streamenh/model/network.hpp"

namespace streamenh {

/// One enhancement stream: a shared read-only network plus this stream's
/// state. Output lags input by latency() samples.
class EnhancerSession {
 public:
  explicit EnhancerSession(std::shared_ptr<const Network> network);

  /// Builds the network for `weights`, whose embedded config must equal
  /// `config`.
  static EnhancerSession create(const ModelConfig& config, const WeightBundle& weights);

  const Network& network() const { return *network_; }
  std::shared_ptr<const Network> shared_network() const { return network_; }
  const StreamState& state() const { return state_; }

  int hop_size() const { return network_->config().stft.hop_size; }
  int latency() const { return latency_samples(network_->config().stft); }

  /// hop_size samples in, hop_size enhanced samples out.
  void process_frame(std::span<const float> in, std::span<float> out);
  std::vector<float> process_frame(std::span<const float> in);

  /// Feeds zero frames and returns the latency() samples still in flight.
  std::vector<float> flush();

  void reset();

 private:
  std::shared_ptr<const Network> network_;
  StreamState state_;
};

/// Runs a whole signal through the session frame by frame (zero-padding the
/// last frame), flushes, and drops the latency so that output[n] lines up
/// with samples[n]. Returns samples.size() values.
std::vector<float> enhance_stream(EnhancerSession& session, std::span<const float> samples);

}  // namespace streamenh
