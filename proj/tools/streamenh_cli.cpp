// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// streamenh: enhance, bench, selftest, weights, golden.
//
// Exit codes: 0 success, 1 validation or format error, 2 invariant failure.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "streamenh/bench/macs.hpp"
#include "streamenh/bench/rtf.hpp"
#include "streamenh/bench/table.hpp"
#include "streamenh/io/fusion.hpp"
#include "streamenh/io/golden.hpp"
#include "streamenh/io/randomize.hpp"
#include "streamenh/io/wav.hpp"
#include "streamenh/runtime/selftest.hpp"
#include "streamenh/runtime/session.hpp"

namespace se = streamenh;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInvariant = 2;

// Runtime weights: batch norms folded, or marked fused when there are none.
se::WeightBundle deployable(const se::WeightBundle& w) {
  if (w.fused()) return w;
  return se::fuse_batchnorm(w);
}

struct EnhanceArgs {
  std::string model, variant, input, output;
};

int run_enhance(const EnhanceArgs& a) {
  const se::WeightBundle weights = se::load(a.model);
  const auto config = weights.config();
  if (!config) throw se::Error(se::ErrorCode::kConfig, "weight file carries no model config");
  if (!a.variant.empty() && a.variant != config->variant)
    throw se::Error(se::ErrorCode::kConfig,
                    "model was built as variant '" + config->variant + "', not '" + a.variant + "'");
  const se::WavFile in = se::read_wav(a.input);
  auto session = se::EnhancerSession::create(*config, deployable(weights));
  const auto start = std::chrono::steady_clock::now();
  se::WavFile out = in;
  out.samples = se::enhance_stream(session, in.samples);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  se::write_wav(a.output, out);
  const double audio = double(in.samples.size()) / in.sample_rate;
  std::printf("enhanced %.2f s of audio in %.3f s (RTF %.4f)\n", audio, elapsed,
              audio > 0 ? elapsed / audio : 0.0);
  return kOk;
}

struct BenchArgs {
  std::string preset = "B", variant = "base";
  double seconds = 10;
  int threads = 1;
  std::uint64_t seed = 0;
  bool csv = false;
};

int run_bench(const BenchArgs& a) {
  std::vector<std::string> presets;
  if (a.preset == "all")
    presets = se::preset_names();
  else
    presets = {a.preset};
  std::vector<se::BenchRow> rows;
  for (const auto& p : presets) {
    const se::ModelConfig c = se::make_variant(se::preset_config(p), a.variant);
    auto net = std::make_shared<const se::Network>(deployable(se::random_weights(c, a.seed)));
    se::RtfOptions o;
    o.seconds = a.seconds;
    o.threads = a.threads;
    o.seed = a.seed;
    const auto rtf = se::measure_rtf(net, o);
    rows.push_back(se::make_row(rtf, se::parameter_count(c), se::count_macs(net->graph())));
  }
  std::cout << (a.csv ? se::format_csv(rows) : se::format_table(rows));
  return kOk;
}

struct SelftestArgs {
  std::uint64_t seed = 1;
  double seconds = 3;
  std::string fault;
  std::vector<std::string> presets, variants;
};

int run_selftest(const SelftestArgs& a) {
  se::SelftestOptions o;
  o.seed = a.seed;
  o.seconds = a.seconds;
  if (!a.presets.empty()) o.presets = a.presets;
  if (!a.variants.empty()) o.variants = a.variants;
  if (a.fault == "lookahead")
    o.causality_fixture = se::CausalityFixture::kLookaheadStream;
  else if (a.fault == "peek")
    o.causality_fixture = se::CausalityFixture::kPeekingOffline;
  else if (!a.fault.empty())
    throw se::Error(se::ErrorCode::kConfig, "unknown fault fixture '" + a.fault + "'");
  for (const auto& p : o.presets) se::preset_config(p);
  for (const auto& v : o.variants) se::make_variant(se::preset_config("T"), v);
  const auto report = se::run_selftest(o);
  std::cout << report.format();
  return report.passed() ? kOk : kInvariant;
}

int run_inspect(const std::string& path) {
  const auto w = se::load(path);
  std::printf("fused: %s\n", w.fused() ? "yes" : "no");
  if (auto c = w.config()) std::printf("model: %s/%s\n", c->preset.c_str(), c->variant.c_str());
  std::size_t total = 0;
  std::printf("%-36s %-20s %10s\n", "tensor", "shape", "elements");
  for (const auto& [name, t] : w.tensors()) {
    std::string shape = "[";
    for (std::size_t i = 0; i < t.dims.size(); ++i)
      shape += (i ? "," : "") + std::to_string(t.dims[i]);
    shape += "]";
    std::printf("%-36s %-20s %10zu\n", name.c_str(), shape.c_str(), t.numel());
    total += t.numel();
  }
  std::printf("%zu tensors, %zu values\n", w.size(), total);
  return kOk;
}

int run_fuse(const std::string& in, const std::string& out) {
  se::save(se::fuse_batchnorm(se::load(in)), out);
  return kOk;
}

struct RandomizeArgs {
  std::string preset = "B", variant = "base", output;
  std::uint64_t seed = 0;
};

int run_randomize(const RandomizeArgs& a) {
  const auto c = se::make_variant(se::preset_config(a.preset), a.variant);
  se::save(se::random_weights(c, a.seed), a.output);
  return kOk;
}

int run_golden(const std::string& dir) {
  bool all = true;
  for (const auto& r : se::replay_all(dir)) {
    std::printf("%s  %-28s max err %.3g (tol %.3g)%s%s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                r.max_abs_error, r.tolerance, r.passed ? "" : "  first divergence: ",
                r.divergence.c_str());
    all = all && r.passed;
  }
  return all ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streamenh: streaming speech-enhancement engine"};
  app.require_subcommand(1);
  std::function<int()> action;

  EnhanceArgs ea;
  auto* enhance = app.add_subcommand("enhance", "Enhance a 16 kHz mono wav file");
  enhance->add_option("--model", ea.model, "Weight file")->required();
  enhance->add_option("--variant", ea.variant, "Expected variant tag");
  enhance->add_option("input", ea.input, "Input wav")->required();
  enhance->add_option("output", ea.output, "Output wav")->required();
  enhance->callback([&] { action = [&] { return run_enhance(ea); }; });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Measure RTF and count MACs with random weights");
  bench->add_option("--preset", ba.preset, "T, B, S, M, L or all");
  bench->add_option("--variant", ba.variant, "base, k3, layernorm, dprnn or dpt");
  bench->add_option("--seconds", ba.seconds, "Timed audio seconds (>= 5)");
  bench->add_option("--threads", ba.threads, "Concurrent independent streams");
  bench->add_option("--seed", ba.seed, "Weight and audio seed");
  bench->add_flag("--csv", ba.csv, "Emit CSV instead of a text table");
  bench->callback([&] { action = [&] { return run_bench(ba); }; });

  SelftestArgs sa;
  auto* selftest = app.add_subcommand("selftest", "Run the invariant suites on every preset and variant");
  selftest->add_option("--seed", sa.seed, "Seed for weights and audio");
  selftest->add_option("--seconds", sa.seconds, "Audio seconds per case");
  selftest->add_option("--preset", sa.presets, "Restrict to presets");
  selftest->add_option("--variant", sa.variants, "Restrict to variants");
  selftest->add_option("--inject-fault", sa.fault, "lookahead or peek")->group("");
  selftest->callback([&] { action = [&] { return run_selftest(sa); }; });

  auto* weights = app.add_subcommand("weights", "Weight-file tools");
  weights->require_subcommand(1);
  std::string inspect_path, fuse_in, fuse_out;
  auto* inspect = weights->add_subcommand("inspect", "List tensors");
  inspect->add_option("file", inspect_path)->required();
  inspect->callback([&] { action = [&] { return run_inspect(inspect_path); }; });
  auto* fuse = weights->add_subcommand("fuse", "Fold batch norms into adjacent layers");
  fuse->add_option("input", fuse_in)->required();
  fuse->add_option("output", fuse_out)->required();
  fuse->callback([&] { action = [&] { return run_fuse(fuse_in, fuse_out); }; });
  RandomizeArgs ra;
  auto* randomize = weights->add_subcommand("randomize", "Write seeded random weights for a preset");
  randomize->add_option("--preset", ra.preset);
  randomize->add_option("--variant", ra.variant);
  randomize->add_option("--seed", ra.seed);
  randomize->add_option("output", ra.output)->required();
  randomize->callback([&] { action = [&] { return run_randomize(ra); }; });

  std::string golden_dir;
  auto* golden = app.add_subcommand("golden", "Replay a golden-case directory");
  golden->add_option("dir", golden_dir)->required();
  golden->callback([&] { action = [&] { return run_golden(golden_dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  try {
    return action();
  } catch (const se::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", se::error_code_name(e.code()), e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
}
