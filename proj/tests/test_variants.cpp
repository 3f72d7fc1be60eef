// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include "kernel_sweeps.hpp"
#include "streamenh/bench/macs.hpp"
#include "streamenh/io/randomize.hpp"
#include "streamenh/model/network.hpp"

using namespace streamenh;
using testing::scaled_error;
using testing::to_eigen;

namespace {

void check_sweep(const sweeps::SweepResult& r) {
  INFO(r.kernel << " worst scaled error " << r.worst);
  CHECK(r.cases >= 100);
  CHECK(r.worst < 1e-5);
}

}  // namespace

TEST_CASE("timeconv3_step matches the naive causal sequence") {
  check_sweep(sweeps::timeconv_sweep(31, 120));
}
TEST_CASE("timedeconv3_step matches the naive causal sequence") {
  check_sweep(sweeps::timedeconv_sweep(32, 120));
}
TEST_CASE("dpt_time_step matches windowed attention including eviction") {
  check_sweep(sweeps::dpt_sweep(33, 120));
}
TEST_CASE("dprnn_freq_step matches the bidirectional scan") {
  check_sweep(sweeps::dprnn_sweep(34, 120));
}

TEST_CASE("kv cache keeps the newest frames in order") {
  KvCache<float> cache(3, 1, 1);
  CHECK(cache.size() == 0);
  for (int t = 0; t < 5; ++t) {
    FeatureMap k = FeatureMap::Constant(1, 1, float(t));
    cache.push(k, -k);
    CHECK(cache.size() == std::min(t + 1, 3));
    CHECK(cache.key(cache.size() - 1)(0, 0) == float(t));
  }
  CHECK(cache.key(0)(0, 0) == 2.f);
  CHECK(cache.key(1)(0, 0) == 3.f);
  CHECK(cache.value(2)(0, 0) == -4.f);
  CHECK(cache.bytes() == 2 * 3 * sizeof(float));
  cache.reset();
  CHECK(cache.size() == 0);
  CHECK(cache == KvCache<float>(3, 1, 1));
}

TEST_CASE("dpt window of one attends only the current frame") {
  std::mt19937_64 rng(35);
  const int channels = 8, positions = 5;
  const auto a = sweeps::random_attention(rng, channels, 2);
  const auto w = sweeps::engine_attention(a, channels);
  KvCache<float> cache(1, positions, channels);
  TimeAttentionScratch<float> s;
  s.resize(positions, channels, 1);
  FeatureMap y(positions, channels);
  for (int t = 0; t < 4; ++t) {
    const auto x = oracle::random_mat(rng, positions, channels);
    dpt_time_step(to_eigen(x), cache, w, s, y);
    // softmax over one key is 1, so the output is W_o (W_v x + b_v) + b_o.
    const auto v = oracle::linear(x, a.wv, a.bv);
    CHECK(scaled_error(y, oracle::linear(v, a.wo, a.bo)) < 1e-5);
  }
}

TEST_CASE("time conv cache shifts frames oldest first") {
  TimeConvCache<float> cache(3, 1, 1);
  CHECK(cache.length() == 2);
  for (int t = 1; t <= 3; ++t) cache.push(FeatureMap::Constant(1, 1, float(t)));
  CHECK(cache.frame(0)(0, 0) == 2.f);
  CHECK(cache.frame(1)(0, 0) == 3.f);
  cache.reset();
  CHECK(cache == TimeConvCache<float>(3, 1, 1));
  TimeConvCache<float> none(1, 4, 4);
  CHECK(none.length() == 0);
  CHECK(none.bytes() == 0);
}

TEST_CASE("timeconv with one tap equals conv_freq") {
  std::mt19937_64 rng(36);
  const int bins = 17, cin = 3, cout = 5;
  const auto w = oracle::uniform(rng, std::size_t(3) * cin * cout), b = oracle::uniform(rng, cout);
  const auto x = to_eigen(oracle::random_mat(rng, bins, cin));
  const auto cw = ConvWeights<float>::from_tensor(testing::to_float(w), testing::to_float(b), 3, cin, cout);
  TimeConvCache<float> cache(1, bins, cin);
  FeatureMap cols(9, 3 * cin), y(9, cout);
  timeconv3_step(x, cache, {cw.weight}, cw.bias, 3, 2, 1, cols, y);
  CHECK((y - conv_freq(x, cw, 2, 1)).cwiseAbs().maxCoeff() == 0.0f);
}

TEST_CASE("k3 variant costs more compute and state than base") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const ModelConfig base = preset_config(name);
    const ModelConfig k3 = make_variant(base, "k3");
    CHECK(k3.time_kernel == 3);
    CHECK(count_macs(k3).per_frame > count_macs(base).per_frame);
    CHECK(parameter_count(k3) > parameter_count(base));
    const Network nb(random_weights(base, 1)), nk(random_weights(k3, 1));
    CHECK(nk.make_state().carried_bytes() > nb.make_state().carried_bytes());
  }
}

TEST_CASE("dprnn variant stays within the base parameter budget") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const ModelConfig base = preset_config(name);
    const double pb = double(parameter_count(base));
    const double pd = double(parameter_count(make_variant(base, "dprnn")));
    CHECK(std::abs(pd - pb) / pb < 0.05);
  }
}

TEST_CASE("dpt variant holds a bounded time window") {
  const ModelConfig dpt = make_variant(preset_config("T"), "dpt");
  CHECK(dpt.block == BlockKind::kDpt);
  const Network net(random_weights(dpt, 2));
  const auto state = net.make_state();
  REQUIRE(state.kv.size() == std::size_t(dpt.n_blocks));
  CHECK(state.kv.front().capacity() == dpt.dpt_lookbehind + 1);
}
