// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <map>

#include "oracles/naive.hpp"
#include "streamenh/bench/macs.hpp"
#include "streamenh/io/fusion.hpp"
#include "streamenh/io/randomize.hpp"
#include "streamenh/model/network.hpp"
#include "support.hpp"

using namespace streamenh;

namespace {

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

struct Target {
  double params;
  double macs_per_s;
};

const std::map<std::string, Target> kTargets{
    {"T", {22e3, 55e6}},   {"B", {92e3, 262e6}},   {"S", {195e3, 664e6}},
    {"M", {492e3, 2.9e9}}, {"L", {1105e3, 11e9}},
};

ModelConfig tiny(const std::string& variant) {
  ModelConfig c;
  c.preset = "tiny";
  c.enc_channels = {4, 6};
  c.enc_strides = {2, 2};
  c.n_blocks = 2;
  c.hidden = 8;
  c.n_heads = 2;
  c = make_variant(c, variant);
  c.dpt_lookbehind = 2;
  return c;
}

oracle::Seq random_spectra(std::uint64_t seed, int frames, int bins) {
  std::mt19937_64 rng(seed);
  oracle::Seq s;
  for (int t = 0; t < frames; ++t) s.push_back(oracle::random_mat(rng, bins, 2, -2, 2));
  return s;
}

ComplexSpectrum to_spectrum(const oracle::Mat& m) {
  ComplexSpectrum s(m.rows);
  for (int f = 0; f < m.rows; ++f) s[f] = {float(m(f, 0)), float(m(f, 1))};
  return s;
}

double mask_error(const Network& net, const WeightBundle& bundle, const oracle::Seq& spectra) {
  const auto ref = oracle::Model(bundle).masks(spectra);
  auto state = net.make_state();
  double worst = 0;
  for (std::size_t t = 0; t < spectra.size(); ++t) {
    const MaskFrame m = net.forward_frame(state, to_spectrum(spectra[t]));
    FeatureMap got(m.size(), 2);
    for (Eigen::Index f = 0; f < m.size(); ++f) got(f, 0) = m[f].real(), got(f, 1) = m[f].imag();
    worst = std::max(worst, testing::scaled_error(got, ref[t]));
  }
  return worst;
}

}  // namespace

TEST_CASE("presets carry the documented hyperparameters") {
  CHECK(preset_names() == std::vector<std::string>{"T", "B", "S", "M", "L"});
  const auto t = preset_config("T");
  CHECK(t.enc_channels == std::vector<int>{12, 12, 12});
  CHECK(t.n_blocks == 2);
  CHECK(t.hidden == 28);
  CHECK(t.n_heads == 2);
  const auto l = preset_config("L");
  CHECK(l.enc_strides == std::vector<int>{2, 1, 1});
  CHECK(l.n_blocks == 6);
  CHECK(l.hidden == 120);
  for (const auto& p : preset_names())
    for (const auto& v : variant_names()) CHECK_NOTHROW(make_variant(preset_config(p), v).validate());
}

TEST_CASE("unknown preset and variant names are rejected") {
  CHECK(error_of([] { preset_config("XL"); }) == ErrorCode::kUnknownPreset);
  CHECK(error_of([] { make_variant(preset_config("T"), "k5"); }) == ErrorCode::kUnknownVariant);
}

TEST_CASE("parameter counts land within 15 percent of the targets") {
  for (const auto& [name, target] : kTargets) {
    CAPTURE(name);
    const double p = double(parameter_count(preset_config(name)));
    CHECK(std::abs(p - target.params) / target.params <= 0.15);
  }
  const double k3 = double(parameter_count(make_variant(preset_config("B"), "k3")));
  CHECK(std::abs(k3 - 187e3) / 187e3 <= 0.15);
}

TEST_CASE("layernorm variant has exactly the base parameter count") {
  for (const auto& name : preset_names()) {
    const auto base = preset_config(name);
    CHECK(parameter_count(make_variant(base, "layernorm")) == parameter_count(base));
  }
}

TEST_CASE("compute per second lands within 35 percent of the targets") {
  for (const auto& [name, target] : kTargets) {
    CAPTURE(name);
    const double m = count_macs(preset_config(name)).per_second;
    CHECK(std::abs(m - target.macs_per_s) / target.macs_per_s <= 0.35);
  }
}

TEST_CASE("presets are ordered by size and cost") {
  std::size_t last_params = 0;
  std::uint64_t last_macs = 0;
  for (const auto& name : preset_names()) {
    const auto c = preset_config(name);
    CHECK(parameter_count(c) > last_params);
    CHECK(count_macs(c).per_frame > last_macs);
    last_params = parameter_count(c);
    last_macs = count_macs(c).per_frame;
  }
}

TEST_CASE("parameter count sums the learned graph tensors") {
  for (const auto& name : preset_names())
    for (const auto& v : variant_names()) {
      const auto c = make_variant(preset_config(name), v);
      std::size_t total = 0;
      for (const auto& p : build_model(c).parameters())
        if (p.learned) total += p.size();
      CHECK(parameter_count(c) == total);
    }
}

TEST_CASE("config json round trip") {
  for (const auto& name : preset_names())
    for (const auto& v : variant_names()) {
      const auto c = make_variant(preset_config(name), v);
      const nlohmann::json j = c;
      CHECK(j.get<ModelConfig>() == c);
      CHECK(nlohmann::json::parse(j.dump()).get<ModelConfig>() == c);
    }
  nlohmann::json broken = preset_config("T");
  broken.erase("hidden");
  CHECK(error_of([&] { broken.get<ModelConfig>(); }) == ErrorCode::kConfig);
}

TEST_CASE("invalid configs are rejected") {
  auto c = preset_config("B");
  c.n_heads = 3;
  CHECK(error_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = preset_config("B");
  c.enc_strides.pop_back();
  CHECK(error_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = preset_config("B");
  c.time_kernel = 2;
  CHECK(error_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = preset_config("B");
  c.n_blocks = -1;
  CHECK(error_of([&] { c.validate(); }) == ErrorCode::kConfig);
}

TEST_CASE("shape plan chains from spectrum to mask") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto c = preset_config(name);
    const auto plan = shape_plan(c);
    REQUIRE(!plan.empty());
    CHECK(plan.front().in == Shape2{257, 2});
    CHECK(plan.back().out == Shape2{257, 2});
    CHECK(plan.back().kind == LayerKind::kMask);
    for (std::size_t i = 1; i < plan.size(); ++i) CHECK(plan[i].in == plan[i - 1].out);
  }
  const auto t = shape_plan(preset_config("T"));
  std::vector<int> enc_bins;
  for (const auto& e : t)
    if (e.kind == LayerKind::kConv || e.kind == LayerKind::kDeconv)
      if (e.in.bins != e.out.bins) enc_bins.push_back(e.out.bins);
  CHECK(enc_bins == std::vector<int>{129, 65, 33, 65, 129, 257});
}

TEST_CASE("a model without dual-path blocks is valid") {
  ModelConfig c = tiny("base");
  c.n_blocks = 0;
  CHECK_NOTHROW(c.validate());
  const auto bundle = random_weights(c, 3);
  const Network net(bundle);
  CHECK(net.blocks().empty());
  CHECK(mask_error(net, bundle, random_spectra(4, 4, 257)) < 1e-4);
}

TEST_CASE("network matches the naive model for every variant") {
  for (const auto& v : variant_names()) {
    CAPTURE(v);
    const auto bundle = random_weights(tiny(v), 21);
    const auto spectra = random_spectra(22, 6, 257);
    CHECK(mask_error(Network(bundle), bundle, spectra) < 1e-4);
    if (tiny(v).norm == NormKind::kBatch) {
      const auto fused = fuse_batchnorm(bundle);
      CHECK(mask_error(Network(fused), fused, spectra) < 1e-4);
    }
  }
}

TEST_CASE("network matches the naive model on preset T") {
  const auto bundle = random_weights(preset_config("T"), 23);
  CHECK(mask_error(Network(bundle), bundle, random_spectra(24, 3, 257)) < 1e-4);
}

TEST_CASE("masks are bounded by one in magnitude") {
  const auto bundle = random_weights(tiny("base"), 25);
  const Network net(bundle);
  auto state = net.make_state();
  for (const auto& s : random_spectra(26, 5, 257)) {
    const MaskFrame m = net.forward_frame(state, to_spectrum(s));
    CHECK(m.cwiseAbs().maxCoeff() < 1.0f);
  }
}

TEST_CASE("state from another network is rejected") {
  const Network a(random_weights(tiny("base"), 1));
  const Network b(random_weights(tiny("dpt"), 1));
  auto state = a.make_state();
  CHECK(error_of([&] { b.forward_frame(state, ComplexSpectrum::Zero(257)); }) ==
        ErrorCode::kStateMismatch);
}

TEST_CASE("network rejects bundles that do not match the graph") {
  auto bundle = random_weights(tiny("base"), 5);
  auto missing = bundle;
  missing.erase("head.weight");
  CHECK(error_of([&] { Network n(missing); }) == ErrorCode::kShapeMismatch);
  auto wrong = bundle;
  wrong.at("head.bias") = Tensor::zeros({3});
  CHECK(error_of([&] { Network n(wrong); }) == ErrorCode::kShapeMismatch);
  auto extra = bundle;
  extra.add("stray", Tensor::zeros({1}));
  CHECK(error_of([&] { Network n(extra); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("fused graph drops every batch norm") {
  const auto c = preset_config("S");
  const auto unfused = build_model(c), fused = build_model(c, true);
  CHECK(fused.fused);
  CHECK(fused.layers.size() < unfused.layers.size());
  for (const auto& l : fused.layers) CHECK(l.kind != LayerKind::kBatchNorm);
  CHECK(count_macs(fused).per_frame < count_macs(unfused).per_frame);
}
