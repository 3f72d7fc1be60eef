// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/io/fusion.hpp"

#include <cmath>

namespace streamenh {
namespace {

struct Affine {
  std::vector<double> scale;
  std::vector<double> shift;
};

Affine batchnorm_affine(const WeightBundle& w, const std::string& name, double eps) {
  const auto& gamma = w.at(name + ".gamma").data;
  const auto& beta = w.at(name + ".beta").data;
  const auto& mean = w.at(name + ".running_mean").data;
  const auto& var = w.at(name + ".running_var").data;
  Affine a;
  for (std::size_t c = 0; c < gamma.size(); ++c) {
    const double denom = double(var[c]) + eps;
    if (!(denom > 0))
      throw Error(ErrorCode::kNumeric, name + ": running_var + eps must be positive");
    const double s = gamma[c] / std::sqrt(denom);
    a.scale.push_back(s);
    a.shift.push_back(beta[c] - mean[c] * s);
  }
  return a;
}

// Output channel o of the previous layer becomes s[o] * y + t[o].
void fold_backward(WeightBundle& w, const LayerSpec& layer, const Affine& a) {
  Tensor& weight = w.at(layer.name + ".weight");
  Tensor& bias = w.at(layer.name + ".bias");
  const std::size_t out = a.scale.size();
  if (bias.numel() != out) throw Error(ErrorCode::kFusion, layer.name + ": channel mismatch");
  const auto& dims = weight.dims;
  if (layer.kind == LayerKind::kLinear) {
    // [out x in]
    const std::size_t in = weight.numel() / out;
    for (std::size_t o = 0; o < out; ++o)
      for (std::size_t i = 0; i < in; ++i) weight.data[o * in + i] *= float(a.scale[o]);
  } else if (layer.kind == LayerKind::kConv) {
    // [..., in, out]
    for (std::size_t k = 0; k < weight.numel(); ++k) weight.data[k] *= float(a.scale[k % out]);
  } else {
    // deconv [..., out, in]
    const std::size_t in = dims.back();
    for (std::size_t k = 0; k < weight.numel(); ++k)
      weight.data[k] *= float(a.scale[(k / in) % out]);
  }
  for (std::size_t o = 0; o < out; ++o)
    bias.data[o] = float(bias.data[o] * a.scale[o] + a.shift[o]);
}

// x -> s * x + t ahead of an [rows x in] projection: b += W t, W <- W diag(s).
void fold_into_input(WeightBundle& w, const std::string& weight_name,
                     const std::string& bias_name, const Affine& a) {
  Tensor& weight = w.at(weight_name);
  Tensor& bias = w.at(bias_name);
  const std::size_t in = a.scale.size();
  const std::size_t rows = weight.numel() / in;
  if (weight.dims.back() != in || bias.numel() != rows)
    throw Error(ErrorCode::kFusion, weight_name + ": channel mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = bias.data[r];
    for (std::size_t i = 0; i < in; ++i) {
      float& v = weight.data[r * in + i];
      acc += double(v) * a.shift[i];
      v = float(v * a.scale[i]);
    }
    bias.data[r] = float(acc);
  }
}

void fold_forward(WeightBundle& w, const LayerSpec& layer, const Affine& a) {
  const std::string& n = layer.name;
  switch (layer.kind) {
    case LayerKind::kGru: fold_into_input(w, n + ".w_ih", n + ".b_ih", a); return;
    case LayerKind::kFreqBiGru:
      fold_into_input(w, n + ".fwd.w_ih", n + ".fwd.b_ih", a);
      fold_into_input(w, n + ".bwd.w_ih", n + ".bwd.b_ih", a);
      return;
    case LayerKind::kFreqMhsa:
    case LayerKind::kTimeMhsa:
      for (const char* p : {"q", "k", "v"})
        fold_into_input(w, n + ".w_" + p, n + ".b_" + p, a);
      return;
    case LayerKind::kLinear: fold_into_input(w, n + ".weight", n + ".bias", a); return;
    default: throw Error(ErrorCode::kFusion, n + ": cannot absorb a norm");
  }
}

bool absorbs_input_norm(LayerKind k) {
  return k == LayerKind::kGru || k == LayerKind::kFreqBiGru || k == LayerKind::kFreqMhsa ||
         k == LayerKind::kTimeMhsa;
}

bool absorbs_output_norm(LayerKind k) {
  return k == LayerKind::kConv || k == LayerKind::kDeconv || k == LayerKind::kLinear;
}

}  // namespace

WeightBundle fuse_batchnorm(const WeightBundle& bundle, const ModelGraph& graph) {
  if (bundle.fused() || graph.fused)
    throw Error(ErrorCode::kAlreadyFused, "weights are already fused");
  WeightBundle out = bundle;
  const double eps = graph.config.norm_eps;
  const auto& layers = graph.layers;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.kind != LayerKind::kBatchNorm) continue;
    const LayerSpec* prev = i > 0 ? &layers[i - 1] : nullptr;
    const LayerSpec* next = i + 1 < layers.size() ? &layers[i + 1] : nullptr;
    const Affine a = batchnorm_affine(out, l.name, eps);
    if (next && absorbs_input_norm(next->kind))
      fold_forward(out, *next, a);
    else if (prev && absorbs_output_norm(prev->kind))
      fold_backward(out, *prev, a);
    else if (next && next->kind == LayerKind::kLinear)
      fold_forward(out, *next, a);
    else
      throw Error(ErrorCode::kFusion,
                  l.name + ": no adjacent layer can absorb this norm (previous: " +
                      (prev ? std::string(layer_kind_name(prev->kind)) : "none") + ")");
    for (const char* p : {"gamma", "beta", "running_mean", "running_var"})
      out.erase(l.name + "." + p);
  }
  out.set_fused(true);
  if (out.config()) validate_against_graph(out, build_model(*out.config(), true));
  return out;
}

WeightBundle fuse_batchnorm(const WeightBundle& bundle) {
  if (bundle.fused()) throw Error(ErrorCode::kAlreadyFused, "weights are already fused");
  return fuse_batchnorm(bundle, graph_for(bundle));
}

}  // namespace streamenh
