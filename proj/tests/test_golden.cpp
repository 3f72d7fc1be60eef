// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "oracles/naive.hpp"
#include "streamenh/io/golden.hpp"
#include "streamenh/io/randomize.hpp"
#include "support.hpp"

using namespace streamenh;
namespace fs = std::filesystem;

namespace {

using oracle::Mat;

Tensor tensor(std::vector<std::uint32_t> dims, const std::vector<double>& v) {
  return Tensor(std::move(dims), {v.begin(), v.end()});
}

Tensor tensor(const Mat& m) { return tensor({std::uint32_t(m.rows), std::uint32_t(m.cols)}, m.v); }

Tensor tensor(const oracle::Seq& s) {
  std::vector<double> all;
  for (const auto& m : s) all.insert(all.end(), m.v.begin(), m.v.end());
  return tensor({std::uint32_t(s.size()), std::uint32_t(s[0].rows), std::uint32_t(s[0].cols)}, all);
}

void add_gru(WeightBundle& b, const std::string& prefix, const oracle::Gru& g) {
  const auto gates = std::uint32_t(3 * g.hidden);
  b.add(prefix + "w_ih", tensor({gates, std::uint32_t(g.input)}, g.w_ih));
  b.add(prefix + "w_hh", tensor({gates, std::uint32_t(g.hidden)}, g.w_hh));
  b.add(prefix + "b_ih", tensor({gates}, g.b_ih));
  b.add(prefix + "b_hh", tensor({gates}, g.b_hh));
}

void add_attention(WeightBundle& b, const oracle::Attention& a, int c) {
  const auto cc = std::uint32_t(c);
  const std::pair<const char*, const std::vector<double>*> mats[] = {
      {"w_q", &a.wq}, {"w_k", &a.wk}, {"w_v", &a.wv}, {"w_o", &a.wo}};
  const std::pair<const char*, const std::vector<double>*> vecs[] = {
      {"b_q", &a.bq}, {"b_k", &a.bk}, {"b_v", &a.bv}, {"b_o", &a.bo}};
  for (const auto& [n, v] : mats) b.add(n, tensor({cc, cc}, *v));
  for (const auto& [n, v] : vecs) b.add(n, tensor({cc}, *v));
}

oracle::Gru random_gru(std::mt19937_64& rng, int input, int hidden) {
  return {oracle::uniform(rng, std::size_t(3) * hidden * input),
          oracle::uniform(rng, std::size_t(3) * hidden * hidden), oracle::uniform(rng, 3 * hidden),
          oracle::uniform(rng, 3 * hidden), input, hidden};
}

oracle::Attention random_attention(std::mt19937_64& rng, int c, int heads) {
  const double a = 1.0 / std::sqrt(double(c));
  const std::size_t cc = std::size_t(c) * c;
  return {oracle::uniform(rng, cc, -a, a), oracle::uniform(rng, c, -a, a),
          oracle::uniform(rng, cc, -a, a), oracle::uniform(rng, c, -a, a),
          oracle::uniform(rng, cc, -a, a), oracle::uniform(rng, c, -a, a),
          oracle::uniform(rng, cc, -a, a), oracle::uniform(rng, c, -a, a), heads};
}

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Writes a golden directory from the naive oracles: `per_op` cases for every
// kernel plus an unfused and a fused model case.
GoldenManifest write_golden(const fs::path& dir, std::uint64_t seed, int per_op) {
  fs::create_directories(dir);
  std::mt19937_64 rng(seed);
  GoldenManifest m;
  auto emit = [&](const std::string& op, int i, WeightBundle b, nlohmann::json attrs) {
    GoldenCase c;
    c.id = op + "_" + std::to_string(i);
    c.op = op;
    c.tolerance = 1e-4;
    c.file = c.id + ".bin";
    c.attrs = std::move(attrs);
    save(b, dir / c.file);
    m.cases.push_back(c);
  };
  for (int i = 0; i < per_op; ++i) {
    {
      const int k = 3, stride = pick(rng, 1, 2), pad = 1, bins = pick(rng, 3, 33);
      const int cin = pick(rng, 1, 8), cout = pick(rng, 1, 8);
      const Mat x = oracle::random_mat(rng, bins, cin);
      const auto w = oracle::uniform(rng, std::size_t(k) * cin * cout), b = oracle::uniform(rng, cout);
      WeightBundle t;
      t.add("x", tensor(x));
      t.add("weight", tensor({std::uint32_t(k), std::uint32_t(cin), std::uint32_t(cout)}, w));
      t.add("bias", tensor({std::uint32_t(cout)}, b));
      t.add("expected", tensor(oracle::conv(x, w, b, k, stride, pad)));
      emit("conv_freq", i, t, {{"stride", stride}, {"padding", pad}});

      const int out_bins = (bins - 1) * stride + k - 2 * pad;
      WeightBundle d;
      const auto dw = oracle::uniform(rng, std::size_t(k) * cin * cout);
      d.add("x", tensor(x));
      d.add("weight", tensor({std::uint32_t(k), std::uint32_t(cout), std::uint32_t(cin)}, dw));
      d.add("bias", tensor({std::uint32_t(cout)}, b));
      d.add("expected", tensor(oracle::deconv(x, dw, b, k, stride, pad, out_bins)));
      emit("deconv_freq", i, d, {{"stride", stride}, {"padding", pad}, {"out_bins", out_bins}});
    }
    {
      const int tk = pick(rng, 1, 3), k = 3, stride = pick(rng, 1, 2), bins = pick(rng, 3, 17);
      const int cin = pick(rng, 1, 6), cout = pick(rng, 1, 6), frames = pick(rng, 1, 5);
      oracle::Seq xs;
      for (int t = 0; t < frames; ++t) xs.push_back(oracle::random_mat(rng, bins, cin));
      const auto w = oracle::uniform(rng, std::size_t(tk) * k * cin * cout), b = oracle::uniform(rng, cout);
      WeightBundle t;
      t.add("x", tensor(xs));
      t.add("weight", tensor({std::uint32_t(tk), std::uint32_t(k), std::uint32_t(cin), std::uint32_t(cout)}, w));
      t.add("bias", tensor({std::uint32_t(cout)}, b));
      t.add("expected", tensor(oracle::timeconv(xs, w, b, tk, k, stride, 1)));
      emit("timeconv3_step", i, t, {{"stride", stride}, {"padding", 1}});
    }
    {
      const int positions = pick(rng, 1, 12), input = pick(rng, 1, 12), hidden = pick(rng, 1, 12);
      const auto g = random_gru(rng, input, hidden);
      const Mat x = oracle::random_mat(rng, positions, input), h = oracle::random_mat(rng, positions, hidden);
      WeightBundle t;
      t.add("x", tensor(x));
      t.add("h", tensor(h));
      add_gru(t, "", g);
      t.add("expected", tensor(oracle::gru_rows(g, x, h)));
      emit("gru_step", i, t, nlohmann::json::object());
    }
    {
      const int heads = pick(rng, 1, 4), c = heads * pick(rng, 1, 6), tokens = pick(rng, 1, 20);
      const auto a = random_attention(rng, c, heads);
      const Mat x = oracle::random_mat(rng, tokens, c);
      WeightBundle t;
      t.add("x", tensor(x));
      add_attention(t, a, c);
      t.add("expected", tensor(oracle::attend(a, x, x)));
      emit("mhsa_freq", i, t, {{"heads", heads}});
    }
    {
      const int heads = pick(rng, 1, 2), c = heads * pick(rng, 1, 4), positions = pick(rng, 1, 6);
      const int window = pick(rng, 1, 4), frames = pick(rng, 1, 8);
      const auto a = random_attention(rng, c, heads);
      oracle::Seq xs;
      for (int t = 0; t < frames; ++t) xs.push_back(oracle::random_mat(rng, positions, c));
      WeightBundle t;
      t.add("x", tensor(xs));
      add_attention(t, a, c);
      t.add("expected", tensor(oracle::time_attention(a, xs, window)));
      emit("dpt_time_step", i, t, {{"heads", heads}, {"window", window}});
    }
    {
      const int rows = pick(rng, 1, 20), ch = pick(rng, 2, 16);
      const Mat x = oracle::random_mat(rng, rows, ch, -3, 3);
      const auto g = oracle::uniform(rng, ch, 0.5, 1.5), b = oracle::uniform(rng, ch);
      const auto mu = oracle::uniform(rng, ch), var = oracle::uniform(rng, ch, 0.5, 1.5);
      const double eps = double(1e-5f);
      const auto c = std::uint32_t(ch);
      WeightBundle bn;
      bn.add("x", tensor(x));
      bn.add("gamma", tensor({c}, g));
      bn.add("beta", tensor({c}, b));
      bn.add("running_mean", tensor({c}, mu));
      bn.add("running_var", tensor({c}, var));
      bn.add("expected", tensor(oracle::batchnorm(x, g, b, mu, var, eps)));
      emit("batchnorm_infer", i, bn, {{"eps", eps}});
      WeightBundle ln;
      ln.add("x", tensor(x));
      ln.add("gamma", tensor({c}, g));
      ln.add("beta", tensor({c}, b));
      ln.add("expected", tensor(oracle::layernorm(x, g, b, eps)));
      emit("layernorm", i, ln, {{"eps", eps}});
    }
    {
      const int positions = pick(rng, 1, 12), input = pick(rng, 1, 10), g = pick(rng, 1, 8);
      const int out = pick(rng, 1, 10);
      const auto fwd = random_gru(rng, input, g), bwd = random_gru(rng, input, g);
      const auto pw = oracle::uniform(rng, std::size_t(out) * 2 * g), pb = oracle::uniform(rng, out);
      const Mat x = oracle::random_mat(rng, positions, input);
      WeightBundle t;
      t.add("x", tensor(x));
      add_gru(t, "fwd.", fwd);
      add_gru(t, "bwd.", bwd);
      t.add("proj.weight", tensor({std::uint32_t(out), std::uint32_t(2 * g)}, pw));
      t.add("proj.bias", tensor({std::uint32_t(out)}, pb));
      t.add("expected", tensor(oracle::bigru_rows(fwd, bwd, pw, pb, x)));
      emit("dprnn_freq_step", i, t, nlohmann::json::object());
    }
  }

  ModelConfig cfg;
  cfg.preset = "golden";
  cfg.enc_channels = {4, 6};
  cfg.enc_strides = {2, 2};
  cfg.n_blocks = 1;
  cfg.hidden = 8;
  cfg.n_heads = 2;
  cfg = make_variant(cfg, "k3");
  const WeightBundle weights = random_weights(cfg, seed);
  save(weights, dir / "model.bin");
  oracle::Seq spectra;
  for (int t = 0; t < 5; ++t) spectra.push_back(oracle::random_mat(rng, cfg.input_bins(), 2, -2, 2));
  WeightBundle data;
  data.add("spectra", tensor(spectra));
  data.add("expected", tensor(oracle::Model(weights).masks(spectra)));
  save(data, dir / "model_data.bin");
  for (bool fused : {false, true}) {
    GoldenCase c;
    c.id = fused ? "model_fused" : "model";
    c.op = "model";
    c.tolerance = 1e-4;
    c.file = "model.bin";
    c.attrs = {{"data", "model_data.bin"}, {"fused", fused}};
    m.cases.push_back(c);
  }
  save_manifest(m, dir);
  return m;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("golden cases generated by the naive oracles replay cleanly") {
  TempDir dir("streamenh_golden_ok");
  const auto manifest = write_golden(dir.path, 41, 12);
  std::map<std::string, int> per_op;
  for (const auto& c : manifest.cases) ++per_op[c.op];
  CHECK(per_op.size() == 10);
  for (const auto& [op, n] : per_op) CHECK((op == "model" ? n == 2 : n >= 10));
  const auto results = replay_all(dir.path);
  REQUIRE(results.size() == manifest.cases.size());
  for (const auto& r : results) {
    CAPTURE(r.id);
    CHECK_MESSAGE(r.passed, r.divergence);
    CHECK(r.max_abs_error <= r.tolerance);
  }
}

TEST_CASE("manifest round trip preserves every field") {
  TempDir dir("streamenh_golden_manifest");
  fs::create_directories(dir.path);
  GoldenManifest m;
  m.cases.push_back({"a", "conv_freq", 2.5e-6, "a.bin", {{"stride", 2}, {"padding", 1}}});
  m.cases.push_back({"b", "model", 1e-4, "m.bin", {{"data", "d.bin"}, {"fused", true}}});
  save_manifest(m, dir.path);
  const auto loaded = load_manifest(dir.path);
  REQUIRE(loaded.cases.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(loaded.cases[i].id == m.cases[i].id);
    CHECK(loaded.cases[i].op == m.cases[i].op);
    CHECK(loaded.cases[i].tolerance == m.cases[i].tolerance);
    CHECK(loaded.cases[i].file == m.cases[i].file);
    CHECK(loaded.cases[i].attrs == m.cases[i].attrs);
  }
  std::ifstream f(dir.path / "manifest.json");
  const auto j = nlohmann::json::parse(f);
  CHECK(j.at("version") == 1);
}

TEST_CASE("a corrupted expectation reports the first divergence") {
  TempDir dir("streamenh_golden_bad");
  const auto manifest = write_golden(dir.path, 42, 1);
  const GoldenCase* conv = nullptr;
  for (const auto& c : manifest.cases)
    if (c.op == "conv_freq") conv = &c;
  REQUIRE(conv != nullptr);
  auto bundle = load(dir.path / conv->file);
  bundle.at("expected").data[3] += 0.5f;
  save(bundle, dir.path / conv->file);
  const auto r = replay_case(*conv, dir.path);
  CHECK_FALSE(r.passed);
  CHECK(r.max_abs_error == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.divergence.find("expected[3]") != std::string::npos);
  std::size_t failed = 0;
  for (const auto& res : replay_all(dir.path)) failed += !res.passed;
  CHECK(failed == 1);
}

TEST_CASE("tensor comparison flags size and value mismatches") {
  GoldenResult r;
  r.tolerance = 1e-3;
  const std::vector<float> a{1, 2, 3}, b{1, 2.01f, 3.5f};
  compare_tensors(a, b, "y", r);
  CHECK_FALSE(r.passed);
  CHECK(r.divergence.find("y[1]") != std::string::npos);
  compare_tensors(a, std::vector<float>{1, 2}, "y", r);
  CHECK_FALSE(r.passed);
  compare_tensors(a, a, "y", r);
  CHECK(r.passed);
  CHECK(r.max_abs_error == 0);
}

TEST_CASE("malformed golden inputs raise errors") {
  TempDir dir("streamenh_golden_err");
  CHECK_THROWS_AS(load_manifest(dir.path), Error);
  fs::create_directories(dir.path);
  {
    std::ofstream f(dir.path / "manifest.json");
    f << "{\"version\":1,\"cases\":[{\"id\":\"x\"}]}";
  }
  try {
    load_manifest(dir.path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
  }
  {
    std::ofstream f(dir.path / "manifest.json");
    f << "{\"version\":2,\"cases\":[]}";
  }
  try {
    load_manifest(dir.path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVersionMismatch);
  }
  WeightBundle b;
  b.add("x", Tensor({1, 1}, {0.f}));
  save(b, dir.path / "c.bin");
  try {
    replay_case({"u", "no_such_op", 1e-5, "c.bin", nlohmann::json::object()}, dir.path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
  }
}
