// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "streamenh/model/config.hpp"

namespace streamenh {

enum class LayerKind {
  kConv,
  kDeconv,
  kBatchNorm,
  kLayerNorm,
  kPrelu,
  kSkipAdd,
  kResidualAdd,
  kLinear,
  kGru,
  kFreqMhsa,
  kTimeMhsa,
  kFreqBiGru,
  kMask,
};

const char* layer_kind_name(LayerKind kind);

/// [frequency positions x channels] of one frame.
struct Shape2 {
  int bins = 0;
  int channels = 0;
  bool operator==(const Shape2&) const = default;
};

struct ParamSpec {
  std::string name;
  std::vector<int> shape;
  bool learned = true;  // false for batch-norm running statistics

  std::size_t size() const;
};

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  Shape2 in;
  Shape2 out;
  int kernel = 1;
  int stride = 1;
  int padding = 0;
  int time_kernel = 1;
  int heads = 0;
  int window = 0;      // cached frames seen by time attention
  int gru_hidden = 0;  // kGru / kFreqBiGru
  std::string skip_from;
  std::vector<ParamSpec> params;
};

/// Introspectable description of a network: the ordered layer list with
/// shapes and parameter names. A fused graph omits every batch-norm layer.
struct ModelGraph {
  ModelConfig config;
  bool fused = false;
  std::vector<LayerSpec> layers;

  const LayerSpec* find(std::string_view name) const;
  std::vector<ParamSpec> parameters() const;
};

/// Parameter tensors are named `<layer>.<param>`: enc{i}.conv.weight,
/// block{i}.gru.w_ih, dec{i}.deconv.bias, head.weight, ...
ModelGraph build_model(const ModelConfig& config, bool fused = false);

/// Learned scalar parameters of the unfused network (running statistics of
/// batch norms are buffers and are not counted).
std::size_t parameter_count(const ModelConfig& config);

struct ShapeEntry {
  std::string layer;
  LayerKind kind;
  Shape2 in;
  Shape2 out;
};

std::vector<ShapeEntry> shape_plan(const ModelConfig& config);

}  // namespace streamenh
