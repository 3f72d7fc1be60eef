// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/io/golden.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "streamenh/io/fusion.hpp"
#include "streamenh/kernels.hpp"
#include "streamenh/model/network.hpp"
#include "streamenh/variants/dprnn.hpp"
#include "streamenh/variants/kv_cache.hpp"
#include "streamenh/variants/time_conv.hpp"

namespace streamenh {
namespace {

using Map = Eigen::Map<const RowMatrix<float>>;
using VMap = Eigen::Map<const Vector<float>>;

class CaseData {
 public:
  CaseData(WeightBundle b, const nlohmann::json& attrs, std::string id)
      : bundle_(std::move(b)), attrs_(attrs), id_(std::move(id)) {}

  const Tensor& tensor(const std::string& name) const {
    if (!bundle_.contains(name)) fail("missing tensor " + name);
    return bundle_.at(name);
  }
  std::span<const float> values(const std::string& name) const { return tensor(name).values(); }

  std::uint32_t dim(const std::string& name, std::size_t axis) const {
    const Tensor& t = tensor(name);
    if (axis >= t.dims.size()) fail(name + " has too few dimensions");
    return t.dims[axis];
  }

  FeatureMap matrix(const std::string& name) const {
    const Tensor& t = tensor(name);
    if (t.dims.size() != 2) fail(name + " must be 2-D");
    return Map(t.data.data(), t.dims[0], t.dims[1]);
  }

  // Slice t of a [T, R, C] tensor.
  FeatureMap slice(const std::string& name, std::size_t t) const {
    const Tensor& x = tensor(name);
    if (x.dims.size() != 3) fail(name + " must be 3-D");
    const std::size_t n = std::size_t(x.dims[1]) * x.dims[2];
    return Map(x.data.data() + t * n, x.dims[1], x.dims[2]);
  }

  Vector<float> vec(const std::string& name) const {
    auto v = values(name);
    return VMap(v.data(), Eigen::Index(v.size()));
  }

  int attr_int(const char* key) const {
    if (!attrs_.contains(key) || !attrs_[key].is_number_integer()) fail(std::string("missing attr ") + key);
    return attrs_[key].get<int>();
  }
  double attr_double(const char* key) const {
    if (!attrs_.contains(key) || !attrs_[key].is_number()) fail(std::string("missing attr ") + key);
    return attrs_[key].get<double>();
  }

  MhsaWeights<float> attention(int channels) const {
    return MhsaWeights<float>::from_tensors(values("w_q"), values("b_q"), values("w_k"),
                                            values("b_k"), values("w_v"), values("b_v"),
                                            values("w_o"), values("b_o"), channels,
                                            attr_int("heads"));
  }

  GruWeights<float> gru(const std::string& prefix, int input) const {
    const int hidden = static_cast<int>(dim(prefix + "w_hh", 1));
    return GruWeights<float>::from_tensors(values(prefix + "w_ih"), values(prefix + "w_hh"),
                                           values(prefix + "b_ih"), values(prefix + "b_hh"),
                                           input, hidden);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kFormat, "golden case " + id_ + ": " + what);
  }

 private:
  WeightBundle bundle_;
  nlohmann::json attrs_;
  std::string id_;
};

std::vector<float> flatten(const FeatureMap& m) { return {m.data(), m.data() + m.size()}; }

void append(std::vector<float>& out, const FeatureMap& m) {
  out.insert(out.end(), m.data(), m.data() + m.size());
}

std::vector<float> run_kernel(const GoldenCase& c, const CaseData& d) {
  const std::string& op = c.op;
  if (op == "conv_freq") {
    const int k = d.dim("weight", 0), cin = d.dim("weight", 1), cout = d.dim("weight", 2);
    auto w = ConvWeights<float>::from_tensor(d.values("weight"), d.values("bias"), k, cin, cout);
    return flatten(conv_freq(d.matrix("x"), w, d.attr_int("stride"), d.attr_int("padding")));
  }
  if (op == "deconv_freq") {
    const int k = d.dim("weight", 0), cout = d.dim("weight", 1), cin = d.dim("weight", 2);
    auto w = DeconvWeights<float>::from_tensor(d.values("weight"), d.values("bias"), k, cin, cout);
    return flatten(deconv_freq(d.matrix("x"), w, d.attr_int("stride"), d.attr_int("padding"),
                               d.attr_int("out_bins")));
  }
  if (op == "timeconv3_step") {
    const int tk = d.dim("weight", 0), k = d.dim("weight", 1), cin = d.dim("weight", 2),
              cout = d.dim("weight", 3);
    const int frames = d.dim("x", 0), bins = d.dim("x", 1);
    const int stride = d.attr_int("stride"), pad = d.attr_int("padding");
    const int out_bins = conv_output_size(bins, k, stride, pad);
    std::vector<FeatureMap> taps;
    const auto w = d.values("weight");
    for (int t = 0; t < tk; ++t) taps.push_back(Map(w.data() + std::size_t(t) * k * cin * cout, k * cin, cout));
    const Vector<float> bias = d.vec("bias");
    TimeConvCache<float> cache(tk, bins, cin);
    FeatureMap cols(out_bins, k * cin), out(out_bins, cout);
    std::vector<float> all;
    for (int t = 0; t < frames; ++t) {
      timeconv3_step(d.slice("x", t), cache, taps, bias, k, stride, pad, cols, out);
      append(all, out);
    }
    return all;
  }
  if (op == "gru_step") {
    FeatureMap h = d.matrix("h");
    const FeatureMap x = d.matrix("x");
    auto w = d.gru("", static_cast<int>(x.cols()));
    GruScratch<float> s;
    s.resize(x.rows(), w.hidden_size);
    gru_step(x, h, w, s);
    return flatten(h);
  }
  if (op == "mhsa_freq") {
    const FeatureMap x = d.matrix("x");
    return flatten(mhsa_freq(x, d.attention(static_cast<int>(x.cols()))));
  }
  if (op == "dpt_time_step") {
    const int frames = d.dim("x", 0), positions = d.dim("x", 1), channels = d.dim("x", 2);
    const int window = d.attr_int("window");
    auto w = d.attention(channels);
    KvCache<float> cache(window, positions, channels);
    TimeAttentionScratch<float> s;
    s.resize(positions, channels, window);
    FeatureMap out(positions, channels);
    std::vector<float> all;
    for (int t = 0; t < frames; ++t) {
      dpt_time_step(d.slice("x", t), cache, w, s, out);
      append(all, out);
    }
    return all;
  }
  if (op == "batchnorm_infer") {
    BatchNormParams<float> p{d.vec("gamma"), d.vec("beta"), d.vec("running_mean"),
                             d.vec("running_var"), float(d.attr_double("eps"))};
    return flatten(batchnorm_infer(d.matrix("x"), p));
  }
  if (op == "layernorm") {
    LayerNormParams<float> p{d.vec("gamma"), d.vec("beta"), float(d.attr_double("eps"))};
    return flatten(layernorm(d.matrix("x"), p));
  }
  if (op == "dprnn_freq_step") {
    const FeatureMap x = d.matrix("x");
    const int input = static_cast<int>(x.cols());
    BiGruWeights<float> w;
    w.forward = d.gru("fwd.", input);
    w.backward = d.gru("bwd.", input);
    const int channels = d.dim("proj.weight", 0);
    w.proj = LinearWeights<float>::from_tensor(d.values("proj.weight"), d.values("proj.bias"),
                                               2 * w.forward.hidden_size, channels);
    BiGruScratch<float> s;
    s.resize(x.rows(), w.forward.hidden_size);
    FeatureMap out(x.rows(), channels);
    dprnn_freq_step(x, w, s, out);
    return flatten(out);
  }
  d.fail("unknown op " + op);
}

GoldenResult replay_model(const GoldenCase& c, const std::filesystem::path& dir) {
  WeightBundle weights = load(dir / c.file);
  if (!c.attrs.contains("data") || !c.attrs["data"].is_string())
    throw Error(ErrorCode::kFormat, "golden case " + c.id + ": missing attr data");
  CaseData d(load(dir / c.attrs["data"].get<std::string>()), c.attrs, c.id);
  if (c.attrs.value("fused", false)) weights = fuse_batchnorm(weights);
  const Network net(weights);
  StreamState state = net.make_state();
  const int frames = d.dim("spectra", 0), bins = d.dim("spectra", 1);
  if (bins != net.config().input_bins() || d.dim("spectra", 2) != 2)
    d.fail("spectra shape does not match the model");
  std::vector<float> actual;
  ComplexSpectrum spec(bins);
  MaskFrame mask(bins);
  FeatureMap m(bins, 2);
  for (int t = 0; t < frames; ++t) {
    const FeatureMap x = d.slice("spectra", t);
    for (int f = 0; f < bins; ++f) spec[f] = {x(f, 0), x(f, 1)};
    net.forward_frame(state, spec, mask);
    for (int f = 0; f < bins; ++f) m(f, 0) = mask[f].real(), m(f, 1) = mask[f].imag();
    append(actual, m);
  }
  GoldenResult r{c.id, c.op, false, 0, c.tolerance, {}};
  compare_tensors(d.values("expected"), actual, "expected", r);
  return r;
}

}  // namespace

GoldenManifest load_manifest(const std::filesystem::path& dir) {
  std::ifstream f(dir / "manifest.json");
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + (dir / "manifest.json").string());
  GoldenManifest m;
  try {
    const auto j = nlohmann::json::parse(f);
    if (j.value("version", 1) != 1)
      throw Error(ErrorCode::kVersionMismatch, "golden manifest version " + j.at("version").dump());
    for (const auto& c : j.at("cases")) {
      GoldenCase g;
      g.id = c.at("id").get<std::string>();
      g.op = c.at("op").get<std::string>();
      g.tolerance = c.at("tolerance").get<double>();
      g.file = c.at("file").get<std::string>();
      if (c.contains("attrs")) g.attrs = c.at("attrs");
      m.cases.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("golden manifest: ") + e.what());
  }
  return m;
}

void save_manifest(const GoldenManifest& manifest, const std::filesystem::path& dir) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : manifest.cases)
    cases.push_back({{"id", c.id}, {"op", c.op}, {"tolerance", c.tolerance}, {"file", c.file},
                     {"attrs", c.attrs}});
  std::ofstream f(dir / "manifest.json", std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + (dir / "manifest.json").string());
  f << nlohmann::json{{"version", 1}, {"cases", cases}}.dump(2) << '\n';
}

void compare_tensors(std::span<const float> expected, std::span<const float> actual,
                     const std::string& tensor, GoldenResult& r) {
  if (expected.size() != actual.size()) {
    r.passed = false;
    r.max_abs_error = INFINITY;
    r.divergence = tensor + ": expected " + std::to_string(expected.size()) + " values, got " +
                   std::to_string(actual.size());
    return;
  }
  r.passed = true;
  r.max_abs_error = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double err = std::abs(double(expected[i]) - double(actual[i]));
    const bool bad = !(err <= r.tolerance);
    if (!(err <= r.max_abs_error)) r.max_abs_error = err;
    if (bad && r.passed) {
      r.passed = false;
      std::ostringstream s;
      s << tensor << "[" << i << "]: expected " << expected[i] << ", got " << actual[i];
      r.divergence = s.str();
    }
  }
}

GoldenResult replay_case(const GoldenCase& c, const std::filesystem::path& dir) {
  if (c.op == "model") return replay_model(c, dir);
  CaseData d(load(dir / c.file), c.attrs, c.id);
  const auto actual = run_kernel(c, d);
  GoldenResult r{c.id, c.op, false, 0, c.tolerance, {}};
  compare_tensors(d.values("expected"), actual, "expected", r);
  return r;
}

std::vector<GoldenResult> replay_all(const std::filesystem::path& dir) {
  std::vector<GoldenResult> out;
  for (const auto& c : load_manifest(dir).cases) out.push_back(replay_case(c, dir));
  return out;
}

}  // namespace streamenh
