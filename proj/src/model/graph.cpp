// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/model/graph.hpp"

#include "streamenh/kernels/conv.hpp"

namespace streamenh {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kDeconv: return "deconv";
    case LayerKind::kBatchNorm: return "batchnorm";
    case LayerKind::kLayerNorm: return "layernorm";
    case LayerKind::kPrelu: return "prelu";
    case LayerKind::kSkipAdd: return "skip";
    case LayerKind::kResidualAdd: return "residual";
    case LayerKind::kLinear: return "linear";
    case LayerKind::kGru: return "gru";
    case LayerKind::kFreqMhsa: return "freq_mhsa";
    case LayerKind::kTimeMhsa: return "time_mhsa";
    case LayerKind::kFreqBiGru: return "freq_bigru";
    case LayerKind::kMask: return "mask";
  }
  return "?";
}

std::size_t ParamSpec::size() const {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

const LayerSpec* ModelGraph::find(std::string_view name) const {
  for (const auto& l : layers)
    if (l.name == name) return &l;
  return nullptr;
}

std::vector<ParamSpec> ModelGraph::parameters() const {
  std::vector<ParamSpec> out;
  for (const auto& l : layers)
    for (const auto& p : l.params) out.push_back(p);
  return out;
}

namespace {

class GraphBuilder {
 public:
  GraphBuilder(const ModelConfig& c, bool fused) { graph_.config = c; graph_.fused = fused; }

  LayerSpec& add(std::string name, LayerKind kind, Shape2 in, Shape2 out) {
    LayerSpec l;
    l.name = std::move(name);
    l.kind = kind;
    l.in = in;
    l.out = out;
    graph_.layers.push_back(std::move(l));
    return graph_.layers.back();
  }

  static void param(LayerSpec& l, const std::string& p, std::vector<int> shape,
                    bool learned = true) {
    l.params.push_back({l.name + "." + p, std::move(shape), learned});
  }

  void norm(const std::string& name, Shape2 shape) {
    const ModelConfig& c = graph_.config;
    if (c.norm == NormKind::kBatch) {
      if (graph_.fused) return;
      LayerSpec& l = add(name, LayerKind::kBatchNorm, shape, shape);
      param(l, "gamma", {shape.channels});
      param(l, "beta", {shape.channels});
      param(l, "running_mean", {shape.channels}, false);
      param(l, "running_var", {shape.channels}, false);
    } else {
      LayerSpec& l = add(name, LayerKind::kLayerNorm, shape, shape);
      param(l, "gamma", {shape.channels});
      param(l, "beta", {shape.channels});
    }
  }

  void prelu(const std::string& name, Shape2 shape) {
    LayerSpec& l = add(name, LayerKind::kPrelu, shape, shape);
    param(l, "slope", {shape.channels});
  }

  void linear(const std::string& name, Shape2 in, int out_channels) {
    LayerSpec& l = add(name, LayerKind::kLinear, in, {in.bins, out_channels});
    param(l, "weight", {out_channels, in.channels});
    param(l, "bias", {out_channels});
  }

  void pointwise_conv(const std::string& name, Shape2 in, int out_channels) {
    LayerSpec& l = add(name, LayerKind::kConv, in, {in.bins, out_channels});
    param(l, "weight", {1, in.channels, out_channels});
    param(l, "bias", {out_channels});
  }

  static void gru_params(LayerSpec& l, const std::string& prefix, int input,
                         int hidden) {
    param(l, prefix + "w_ih", {3 * hidden, input});
    param(l, prefix + "w_hh", {3 * hidden, hidden});
    param(l, prefix + "b_ih", {3 * hidden});
    param(l, prefix + "b_hh", {3 * hidden});
  }

  static void attention_params(LayerSpec& l, int c) {
    for (const char* p : {"q", "k", "v", "o"}) {
      param(l, std::string("w_") + p, {c, c});
      param(l, std::string("b_") + p, {c});
    }
  }

  void block(int b, Shape2 shape) {
    const ModelConfig& c = graph_.config;
    const std::string pre = "block" + std::to_string(b) + ".";
    const int h = shape.channels;
    norm(pre + "time_norm", shape);
    if (c.block == BlockKind::kDpt) {
      LayerSpec& l = add(pre + "tmhsa", LayerKind::kTimeMhsa, shape, shape);
      l.heads = c.n_heads;
      l.window = c.dpt_lookbehind + 1;
      attention_params(l, h);
    } else {
      LayerSpec& l = add(pre + "gru", LayerKind::kGru, shape, shape);
      l.gru_hidden = h;
      gru_params(l, "", h, h);
      linear(pre + "time_proj", shape, h);
    }
    add(pre + "time_residual", LayerKind::kResidualAdd, shape, shape);
    norm(pre + "freq_norm", shape);
    if (c.block == BlockKind::kDprnn) {
      const int g = c.dprnn_hidden;
      LayerSpec& l = add(pre + "fgru", LayerKind::kFreqBiGru, shape, {shape.bins, 2 * g});
      l.gru_hidden = g;
      gru_params(l, "fwd.", h, g);
      gru_params(l, "bwd.", h, g);
      linear(pre + "freq_proj", {shape.bins, 2 * g}, h);
    } else {
      LayerSpec& l = add(pre + "mhsa", LayerKind::kFreqMhsa, shape, shape);
      l.heads = c.n_heads;
      attention_params(l, h);
    }
    add(pre + "freq_residual", LayerKind::kResidualAdd, shape, shape);
  }

  ModelGraph build() {
    const ModelConfig& c = graph_.config;
    const int n = static_cast<int>(c.enc_channels.size());
    const int tk = c.time_kernel;
    Shape2 cur{c.input_bins(), 2};
    std::vector<Shape2> enc_in(n), enc_out(n);
    for (int i = 0; i < n; ++i) {
      const std::string pre = "enc" + std::to_string(i) + ".";
      const int s = c.enc_strides[i];
      Shape2 out{conv_output_size(cur.bins, 3, s, 1), c.enc_channels[i]};
      LayerSpec& l = add(pre + "conv", LayerKind::kConv, cur, out);
      l.kernel = 3;
      l.stride = s;
      l.padding = 1;
      l.time_kernel = tk;
      if (tk == 1)
        param(l, "weight", {3, cur.channels, out.channels});
      else
        param(l, "weight", {tk, 3, cur.channels, out.channels});
      param(l, "bias", {out.channels});
      norm(pre + "norm", out);
      prelu(pre + "act", out);
      enc_in[i] = cur;
      enc_out[i] = out;
      cur = out;
    }
    if (c.n_blocks > 0) {
      if (c.has_projections()) {
        pointwise_conv("proj_in", cur, c.hidden);
        cur.channels = c.hidden;
      }
      for (int b = 0; b < c.n_blocks; ++b) block(b, cur);
      if (c.has_projections()) {
        pointwise_conv("proj_out", cur, c.encoder_width());
        cur.channels = c.encoder_width();
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      const std::string pre = "dec" + std::to_string(i) + ".";
      LayerSpec& skip = add(pre + "skip", LayerKind::kSkipAdd, enc_out[i], enc_out[i]);
      skip.skip_from = "enc" + std::to_string(i) + ".act";
      const int out_ch = i > 0 ? c.enc_channels[i - 1] : c.enc_channels[0];
      Shape2 out{enc_in[i].bins, out_ch};
      LayerSpec& l = add(pre + "deconv", LayerKind::kDeconv, enc_out[i], out);
      l.kernel = 3;
      l.stride = c.enc_strides[i];
      l.padding = 1;
      l.time_kernel = tk;
      if (tk == 1)
        param(l, "weight", {3, out.channels, enc_out[i].channels});
      else
        param(l, "weight", {tk, 3, out.channels, enc_out[i].channels});
      param(l, "bias", {out.channels});
      norm(pre + "norm", out);
      prelu(pre + "act", out);
      cur = out;
    }
    pointwise_conv("head", cur, 2);
    add("mask", LayerKind::kMask, {cur.bins, 2}, {cur.bins, 2});
    return std::move(graph_);
  }

 private:
  ModelGraph graph_;
};

}  // namespace

ModelGraph build_model(const ModelConfig& config, bool fused) {
  config.validate();
  return GraphBuilder(config, fused).build();
}

std::size_t parameter_count(const ModelConfig& config) {
  std::size_t total = 0;
  for (const auto& p : build_model(config).parameters())
    if (p.learned) total += p.size();
  return total;
}

std::vector<ShapeEntry> shape_plan(const ModelConfig& config) {
  std::vector<ShapeEntry> out;
  for (const auto& l : build_model(config).layers)
    out.push_back({l.name, l.kind, l.in, l.out});
  return out;
}

}  // namespace streamenh
