// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/bench/rtf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "streamenh/runtime/session.hpp"

namespace streamenh {
namespace {

std::vector<float> seeded_audio(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 0.1f);
  std::vector<float> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

struct StreamTiming {
  std::vector<double> frame_us;
  double total_s = 0;
};

StreamTiming time_stream(std::shared_ptr<const Network> network, const std::vector<float>& audio,
                         std::size_t warmup_frames) {
  using clock = std::chrono::steady_clock;
  EnhancerSession session(std::move(network));
  const std::size_t hop = session.hop_size();
  const std::size_t frames = audio.size() / hop;
  std::vector<float> out(hop);
  StreamTiming t;
  t.frame_us.reserve(frames - warmup_frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const auto start = clock::now();
    session.process_frame(std::span<const float>(audio.data() + f * hop, hop), out);
    const auto stop = clock::now();
    if (f < warmup_frames) continue;
    const double us = std::chrono::duration<double, std::micro>(stop - start).count();
    t.frame_us.push_back(us);
    t.total_s += us * 1e-6;
  }
  return t;
}

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

RtfReport measure_rtf(std::shared_ptr<const Network> network, const RtfOptions& options) {
  if (options.seconds < 5.0) throw Error(ErrorCode::kConfig, "measure_rtf needs seconds >= 5");
  if (options.warmup_seconds < 1.0) throw Error(ErrorCode::kConfig, "warmup must be >= 1 s");
  if (options.threads < 1) throw Error(ErrorCode::kConfig, "threads must be >= 1");
  if (!network->graph().fused) throw Error(ErrorCode::kConfig, "measure_rtf expects fused weights");

  const StftConfig& sc = network->config().stft;
  const std::size_t hop = sc.hop_size;
  const auto frames_for = [&](double s) {
    return static_cast<std::size_t>(std::ceil(s * sc.sample_rate / double(hop)));
  };
  const std::size_t warmup = frames_for(options.warmup_seconds);
  const std::size_t timed = frames_for(options.seconds);
  const auto audio = seeded_audio((warmup + timed) * hop, options.seed);

  std::vector<StreamTiming> timings(options.threads);
  if (options.threads == 1) {
    timings[0] = time_stream(network, audio, warmup);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < options.threads; ++k)
      pool.emplace_back([&, k] { timings[k] = time_stream(network, audio, warmup); });
    for (auto& th : pool) th.join();
  }

  std::vector<double> all;
  double total = 0;
  for (const auto& t : timings) {
    all.insert(all.end(), t.frame_us.begin(), t.frame_us.end());
    total += t.total_s;
  }
  std::sort(all.begin(), all.end());

  RtfReport r;
  r.preset = network->config().preset;
  r.variant = network->config().variant;
  r.frames = static_cast<std::int64_t>(timed);
  r.warmup_frames = static_cast<std::int64_t>(warmup);
  r.threads = options.threads;
  r.mean_us = std::accumulate(all.begin(), all.end(), 0.0) / double(all.size());
  r.p50_us = percentile(all, 0.50);
  r.p90_us = percentile(all, 0.90);
  r.p99_us = percentile(all, 0.99);
  const double audio_s = double(timed * hop) / sc.sample_rate;
  r.rtf = total / options.threads / audio_s;
  return r;
}

std::vector<std::vector<float>> concurrent_outputs(std::shared_ptr<const Network> network,
                                                   int threads, int frames, std::uint64_t seed) {
  const std::size_t hop = network->config().stft.hop_size;
  const auto audio = seeded_audio(std::size_t(frames) * hop, seed);
  std::vector<std::vector<float>> outputs(threads);
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k)
    pool.emplace_back([&, k] {
      EnhancerSession session(network);
      outputs[k].resize(audio.size());
      for (std::size_t f = 0; f < std::size_t(frames); ++f)
        session.process_frame(std::span<const float>(audio.data() + f * hop, hop),
                              std::span<float>(outputs[k].data() + f * hop, hop));
    });
  for (auto& th : pool) th.join();
  return outputs;
}

}  // namespace streamenh
