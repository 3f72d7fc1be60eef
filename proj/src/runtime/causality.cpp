// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/runtime/causality.hpp"

#include <algorithm>
#include <cstring>
#include <random>

namespace streamenh {
namespace {

std::vector<float> noise(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  std::vector<float> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

bool bit_equal(const FeatureMap& a, const FeatureMap& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(float) * a.size()) == 0;
}

}  // namespace

SignalRunner streaming_runner(SessionFactory factory) {
  return [factory = std::move(factory)](std::span<const float> input) {
    EnhancerSession session = factory();
    const std::size_t hop = session.hop_size();
    RunOutput out;
    out.stream.resize(input.size());
    for (std::size_t s = 0; s + hop <= input.size(); s += hop)
      session.process_frame(input.subspan(s, hop), std::span<float>(out.stream.data() + s, hop));
    return out;
  };
}

SignalRunner lookahead_runner(SessionFactory factory) {
  return [factory = std::move(factory)](std::span<const float> input) {
    EnhancerSession session = factory();
    const std::size_t hop = session.hop_size();
    std::vector<float> ahead(input.begin() + std::min(hop, input.size()), input.end());
    ahead.resize(input.size(), 0.0f);
    RunOutput out;
    out.stream.resize(input.size());
    for (std::size_t s = 0; s + hop <= ahead.size(); s += hop)
      session.process_frame(std::span<const float>(ahead).subspan(s, hop),
                            std::span<float>(out.stream.data() + s, hop));
    return out;
  };
}

SignalRunner offline_runner(const Network& network, OfflineOptions options) {
  options.record_trace = true;
  return [&network, options](std::span<const float> input) {
    OfflineResult r = run_offline(network, input, options);
    return RunOutput{std::move(r.stream), std::move(r.trace)};
  };
}

CausalityReport causality_check(const SignalRunner& runner, int hop_size, std::uint64_t seed,
                                int frames) {
  if (frames < 4) throw Error(ErrorCode::kConfig, "causality check needs at least 4 frames");
  std::mt19937_64 rng(seed);
  const std::size_t hop = hop_size;
  const std::vector<float> base = noise(frames * hop, rng);
  const RunOutput reference = runner(base);

  CausalityReport report;
  report.frames = frames;
  report.perturb_frames = {1, frames / 4, frames / 2, frames - 1};
  for (int p : report.perturb_frames) {
    std::vector<float> input = base;
    const std::vector<float> tail = noise(input.size() - p * hop, rng);
    std::copy(tail.begin(), tail.end(), input.begin() + p * hop);
    const RunOutput run = runner(input);
    for (std::size_t m = 0; m < p * hop; ++m) {
      if (std::memcmp(&run.stream[m], &reference.stream[m], sizeof(float)) != 0) {
        report.passed = false;
        report.perturb_frame = p;
        report.first_divergent_frame = static_cast<int>(m / hop);
        break;
      }
    }
    if (report.passed) continue;
    for (std::size_t l = 0; l < run.trace.size() && report.layer.empty(); ++l)
      for (int t = 0; t < p; ++t)
        if (!bit_equal(run.trace[l].frames[t], reference.trace[l].frames[t])) {
          report.layer = run.trace[l].layer;
          break;
        }
    report.message = "perturbing from frame " + std::to_string(p) + " changed output frame " +
                     std::to_string(report.first_divergent_frame);
    if (!report.layer.empty()) report.message += " (first at layer " + report.layer + ")";
    return report;
  }
  report.message = "no output frame before a perturbation changed";
  return report;
}

CausalityReport causality_check(const SessionFactory& factory, std::uint64_t seed, int frames) {
  const int hop = factory().hop_size();
  return causality_check(streaming_runner(factory), hop, seed, frames);
}

}  // namespace streamenh
