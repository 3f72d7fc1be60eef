// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/runtime/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "streamenh/bench/macs.hpp"
#include "streamenh/io/fusion.hpp"
#include "streamenh/io/randomize.hpp"
#include "streamenh/runtime/causality.hpp"
#include "streamenh/runtime/offline.hpp"
#include "streamenh/runtime/session.hpp"

namespace streamenh {
namespace {

std::vector<float> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  std::vector<float> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

std::size_t samples_for(const ModelConfig& c, double seconds) {
  return static_cast<std::size_t>(seconds * c.stft.sample_rate);
}

double max_abs_diff(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(double(a[i]) - double(b[i]));
    if (!(d <= m)) m = d;
  }
  return m;
}

std::string subject(const ModelConfig& c) { return c.preset + "/" + c.variant; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

SuiteCase streaming_offline_case(const ModelConfig& config, std::uint64_t seed, double seconds,
                                 double tolerance) {
  auto net = std::make_shared<const Network>(random_weights(config, seed));
  const auto input = noise(samples_for(config, seconds), seed + 1);
  EnhancerSession session(net);
  const double diff = max_abs_diff(enhance_stream(session, input), process_offline(*net, input));
  return {"streaming_offline", subject(config), diff < tolerance, diff, tolerance,
          "max abs diff " + sci(diff)};
}

SuiteCase causality_case(const ModelConfig& config, std::uint64_t seed, int frames,
                         CausalityFixture fixture) {
  auto net = std::make_shared<const Network>(random_weights(config, seed));
  const SessionFactory factory = [net] { return EnhancerSession(net); };
  const int hop = config.stft.hop_size;
  SuiteCase c{"causality", subject(config), true, 0, 1, ""};
  std::vector<CausalityReport> reports;
  switch (fixture) {
    case CausalityFixture::kNone:
      reports.push_back(causality_check(factory, seed, frames));
      reports.push_back(causality_check(offline_runner(*net), hop, seed, frames));
      break;
    case CausalityFixture::kLookaheadStream:
      c.subject += "+lookahead";
      reports.push_back(causality_check(lookahead_runner(factory), hop, seed, frames));
      break;
    case CausalityFixture::kPeekingOffline:
      c.subject += "+peek";
      reports.push_back(causality_check(offline_runner(*net, {.peek_next_frame = true}), hop,
                                        seed, frames));
      break;
  }
  for (const auto& r : reports) {
    if (r.passed) continue;
    c.passed = false;
    c.value += 1;
    if (c.detail.empty()) c.detail = r.message;
  }
  if (c.passed) c.detail = "prefix bit-identical for perturbations at " +
                           std::to_string(reports.front().perturb_frames.size()) + " frames";
  return c;
}

SuiteCase fusion_case(const ModelConfig& config, std::uint64_t seed, double seconds,
                      double tolerance) {
  const WeightBundle raw = random_weights(config, seed);
  const WeightBundle fused = fuse_batchnorm(raw);
  auto a = std::make_shared<const Network>(raw);
  auto b = std::make_shared<const Network>(fused);
  const auto input = noise(samples_for(config, seconds), seed + 2);
  EnhancerSession sa(a), sb(b);
  const double diff = max_abs_diff(enhance_stream(sa, input), enhance_stream(sb, input));
  const std::size_t layers_raw = a->graph().layers.size(), layers_fused = b->graph().layers.size();
  const auto macs_raw = count_macs(a->graph()).per_frame;
  const auto macs_fused = count_macs(b->graph()).per_frame;
  SuiteCase c{"fusion", subject(config), false, diff, tolerance, ""};
  c.passed = diff < tolerance && layers_fused < layers_raw && macs_fused < macs_raw;
  c.detail = "max abs diff " + sci(diff) + ", layers " + std::to_string(layers_raw) + " -> " +
             std::to_string(layers_fused) + ", MACs/frame " + std::to_string(macs_raw) + " -> " +
             std::to_string(macs_fused);
  return c;
}

SuiteCase cola_case(double seconds, std::uint64_t seed, double tolerance) {
  const StftConfig cfg;
  const Stft stft(cfg);
  StftState state = stft.make_state();
  const std::size_t hop = cfg.hop_size;
  const std::size_t latency = latency_samples(cfg);
  const std::size_t n = static_cast<std::size_t>(seconds * cfg.sample_rate) / hop * hop;
  const auto x = noise(n, seed);
  std::vector<float> y(n + latency, 0.0f);
  std::vector<float> zeros(hop, 0.0f);
  ComplexSpectrum spec(cfg.bins());
  for (std::size_t s = 0; s < n + latency; s += hop) {
    const std::span<const float> in = s < n ? std::span<const float>(x).subspan(s, hop)
                                            : std::span<const float>(zeros);
    stft.analyze_frame(state, in, spec);
    stft.synthesize_frame(state, spec, std::span<float>(y).subspan(s, hop));
  }
  double err = 0, ref = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = double(y[i + latency]) - x[i];
    err += d * d;
    ref += double(x[i]) * x[i];
  }
  const double rel = std::sqrt(err / ref);
  return {"cola", "stft " + std::to_string(cfg.fft_size) + "/" + std::to_string(hop),
          rel < tolerance, rel, tolerance, "relative rms " + sci(rel)};
}

bool SelftestReport::passed() const {
  for (const auto& c : cases)
    if (!c.passed) return false;
  return !cases.empty();
}

std::string SelftestReport::format() const {
  std::string out;
  std::vector<std::string> order;
  std::map<std::string, std::pair<int, int>> totals;
  for (const auto& c : cases) {
    out += std::string(c.passed ? "PASS" : "FAIL") + "  " + c.suite + "  " + c.subject + "  " +
           c.detail + "\n";
    if (!totals.count(c.suite)) order.push_back(c.suite);
    auto& t = totals[c.suite];
    t.first += c.passed;
    t.second += 1;
  }
  for (const auto& s : order) {
    const auto [ok, all] = totals[s];
    out += "suite " + s + ": " + (ok == all ? "PASS" : "FAIL") + " (" + std::to_string(ok) + "/" +
           std::to_string(all) + ")\n";
  }
  return out;
}

SelftestReport run_selftest(const SelftestOptions& o) {
  SelftestReport r;
  std::vector<ModelConfig> configs;
  for (const auto& p : o.presets)
    for (const auto& v : o.variants) configs.push_back(make_variant(preset_config(p), v));
  for (const auto& c : configs) r.cases.push_back(streaming_offline_case(c, o.seed, o.seconds));
  for (const auto& c : configs) {
    if (o.causality_fixture == CausalityFixture::kNone)
      r.cases.push_back(causality_case(c, o.seed, o.causality_frames));
    else
      r.cases.push_back(causality_case(c, o.seed, o.causality_frames, o.causality_fixture));
  }
  for (const auto& c : configs)
    if (c.norm == NormKind::kBatch) r.cases.push_back(fusion_case(c, o.seed, o.seconds));
  r.cases.push_back(cola_case(o.cola_seconds, o.seed));
  return r;
}

}  // namespace streamenh
