// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/runtime/session.hpp"

#include <algorithm>
#include <cmath>

namespace streamenh {

EnhancerSession::EnhancerSession(std::shared_ptr<const Network> network)
    : network_(std::move(network)), state_(network_->make_state()) {}

EnhancerSession EnhancerSession::create(const ModelConfig& config, const WeightBundle& weights) {
  auto embedded = weights.config();
  if (!embedded || !(*embedded == config))
    throw Error(ErrorCode::kShapeMismatch, "weights were not built for this config");
  return EnhancerSession(std::make_shared<const Network>(weights));
}

void EnhancerSession::process_frame(std::span<const float> in, std::span<float> out) {
  const int hop = hop_size();
  if (static_cast<int>(in.size()) != hop || static_cast<int>(out.size()) != hop)
    throw Error(ErrorCode::kInputSize, "expected " + std::to_string(hop) + " samples per frame, got " +
                                           std::to_string(in.size()));
  for (float v : in)
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "non-finite input sample");
  FrameWorkspace& ws = state_.ws;
  const Stft& stft = network_->stft();
  stft.analyze_frame(state_.stft, in, ws.spectrum);
  network_->forward_frame(state_, ws.spectrum, ws.mask);
  apply_mask(ws.spectrum, ws.mask, ws.masked);
  stft.synthesize_frame(state_.stft, ws.masked, out);
}

std::vector<float> EnhancerSession::process_frame(std::span<const float> in) {
  std::vector<float> out(hop_size());
  process_frame(in, out);
  return out;
}

std::vector<float> EnhancerSession::flush() {
  const int hop = hop_size();
  const int frames = (latency() + hop - 1) / hop;
  std::vector<float> zeros(hop, 0.0f);
  std::vector<float> out(static_cast<std::size_t>(frames) * hop);
  for (int f = 0; f < frames; ++f)
    process_frame(zeros, std::span<float>(out.data() + f * hop, hop));
  out.resize(latency());
  return out;
}

void EnhancerSession::reset() { state_.reset(); }

std::vector<float> enhance_stream(EnhancerSession& session, std::span<const float> samples) {
  const std::size_t hop = session.hop_size();
  const std::size_t latency = session.latency();
  const std::size_t n = samples.size();
  std::vector<float> stream;
  stream.reserve(n + hop + latency);
  std::vector<float> frame(hop);
  std::vector<float> out(hop);
  for (std::size_t start = 0; start < n; start += hop) {
    std::fill(frame.begin(), frame.end(), 0.0f);
    std::copy_n(samples.begin() + start, std::min(hop, n - start), frame.begin());
    session.process_frame(frame, out);
    stream.insert(stream.end(), out.begin(), out.end());
  }
  if (n == 0) return {};
  const auto tail = session.flush();
  stream.insert(stream.end(), tail.begin(), tail.end());
  return std::vector<float>(stream.begin() + latency, stream.begin() + latency + n);
}

}  // namespace streamenh
