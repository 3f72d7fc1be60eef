// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/model/config.hpp"

#include <cstdlib>

#include "streamenh/kernels/conv.hpp"

namespace streamenh {

namespace {

const char* norm_name(NormKind k) {
  return k == NormKind::kBatch ? "batch" : "layer";
}

const char* block_name(BlockKind k) {
  switch (k) {
    case BlockKind::kRnnFormer: return "rnnformer";
    case BlockKind::kDprnn: return "dprnn";
    case BlockKind::kDpt: return "dpt";
  }
  return "rnnformer";
}

NormKind parse_norm(const std::string& s) {
  if (s == "batch") return NormKind::kBatch;
  if (s == "layer") return NormKind::kLayer;
  throw Error(ErrorCode::kConfig, "unknown norm '" + s + "'");
}

BlockKind parse_block(const std::string& s) {
  if (s == "rnnformer") return BlockKind::kRnnFormer;
  if (s == "dprnn") return BlockKind::kDprnn;
  if (s == "dpt") return BlockKind::kDpt;
  throw Error(ErrorCode::kConfig, "unknown block '" + s + "'");
}

ModelConfig make_preset(std::string name, std::vector<int> channels,
                        std::vector<int> strides, int n_blocks, int hidden,
                        int heads) {
  ModelConfig c;
  c.preset = std::move(name);
  c.enc_channels = std::move(channels);
  c.enc_strides = std::move(strides);
  c.n_blocks = n_blocks;
  c.hidden = hidden;
  c.n_heads = heads;
  return c;
}

}  // namespace

void ModelConfig::validate() const {
  stft.validate();
  if (enc_channels.size() != enc_strides.size())
    throw Error(ErrorCode::kConfig, "enc_channels and enc_strides differ in length");
  for (int c : enc_channels)
    if (c < 1) throw Error(ErrorCode::kConfig, "encoder width < 1");
  for (int s : enc_strides)
    if (s < 1) throw Error(ErrorCode::kConfig, "encoder stride < 1");
  if (n_blocks < 0) throw Error(ErrorCode::kConfig, "n_blocks < 0");
  if (n_blocks > 0) {
    if (hidden < 1) throw Error(ErrorCode::kConfig, "hidden < 1");
    if (n_heads < 1 || hidden % n_heads != 0)
      throw Error(ErrorCode::kConfig, "hidden must be divisible by n_heads");
  }
  if (time_kernel != 1 && time_kernel != 3)
    throw Error(ErrorCode::kConfig, "time_kernel must be 1 or 3");
  if (block == BlockKind::kDpt && dpt_lookbehind < 0)
    throw Error(ErrorCode::kConfig, "dpt_lookbehind < 0");
  if (block == BlockKind::kDprnn && n_blocks > 0 && dprnn_hidden < 1)
    throw Error(ErrorCode::kConfig, "dprnn_hidden < 1");
  if (!(norm_eps > 0.0f)) throw Error(ErrorCode::kConfig, "norm_eps <= 0");
  int bins = input_bins();
  for (int s : enc_strides) {
    bins = conv_output_size(bins, 3, s, 1);
    if (bins < 1) throw Error(ErrorCode::kConfig, "encoder reduces frequency below 1 bin");
  }
}

int ModelConfig::block_bins() const {
  int bins = input_bins();
  for (int s : enc_strides) bins = conv_output_size(bins, 3, s, 1);
  return bins;
}

int ModelConfig::encoder_width() const {
  return enc_channels.empty() ? 2 : enc_channels.back();
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{
      {"preset", c.preset},
      {"variant", c.variant},
      {"sample_rate", c.stft.sample_rate},
      {"fft_size", c.stft.fft_size},
      {"hop_size", c.stft.hop_size},
      {"enc_channels", c.enc_channels},
      {"enc_strides", c.enc_strides},
      {"n_blocks", c.n_blocks},
      {"hidden", c.hidden},
      {"n_heads", c.n_heads},
      {"norm", norm_name(c.norm)},
      {"time_kernel", c.time_kernel},
      {"block", block_name(c.block)},
      {"dpt_lookbehind", c.dpt_lookbehind},
      {"dprnn_hidden", c.dprnn_hidden},
      {"norm_eps", c.norm_eps},
  };
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  try {
    c.preset = j.at("preset").get<std::string>();
    c.variant = j.at("variant").get<std::string>();
    c.stft.sample_rate = j.at("sample_rate").get<int>();
    c.stft.fft_size = j.at("fft_size").get<int>();
    c.stft.hop_size = j.at("hop_size").get<int>();
    c.enc_channels = j.at("enc_channels").get<std::vector<int>>();
    c.enc_strides = j.at("enc_strides").get<std::vector<int>>();
    c.n_blocks = j.at("n_blocks").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.norm = parse_norm(j.at("norm").get<std::string>());
    c.time_kernel = j.at("time_kernel").get<int>();
    c.block = parse_block(j.at("block").get<std::string>());
    c.dpt_lookbehind = j.at("dpt_lookbehind").get<int>();
    c.dprnn_hidden = j.at("dprnn_hidden").get<int>();
    c.norm_eps = j.at("norm_eps").get<float>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("model config: ") + e.what());
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"T", "B", "S", "M", "L"};
  return names;
}

// Widths are calibrated so that parameter counts land on 22K / 92K / 195K /
// 492K / 1105K and per-second MACs on 55M / 262M / 664M / 2.9G / 11G. The two
// largest presets keep more frequency resolution inside the blocks.
ModelConfig preset_config(std::string_view name) {
  if (name == "T") return make_preset("T", {12, 12, 12}, {2, 2, 2}, 2, 28, 2);
  if (name == "B") return make_preset("B", {56, 56, 56}, {2, 2, 2}, 2, 40, 4);
  if (name == "S") return make_preset("S", {88, 88, 88}, {2, 2, 2}, 3, 48, 4);
  if (name == "M") return make_preset("M", {144, 144, 144}, {2, 2, 1}, 4, 64, 4);
  if (name == "L") return make_preset("L", {88, 88, 88}, {2, 1, 1}, 6, 120, 4);
  throw Error(ErrorCode::kUnknownPreset, "unknown preset '" + std::string(name) + "'");
}

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names{"base", "k3", "layernorm", "dprnn", "dpt"};
  return names;
}

int matched_dprnn_hidden(int hidden) {
  const long target = 4L * hidden * hidden + 4L * hidden;
  int best = 1;
  long best_gap = -1;
  for (int g = 1; g <= 2 * hidden; ++g) {
    // two directions of 3G(I + G) + 6G, plus the 2G -> hidden projection
    const long count = 2L * (3L * g * (hidden + g) + 6L * g) + 2L * g * hidden + hidden;
    const long gap = std::labs(count - target);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = g;
    }
  }
  return best;
}

ModelConfig make_variant(const ModelConfig& base, std::string_view which) {
  ModelConfig c = base;
  if (which == "base") return c;
  if (which == "k3") {
    c.time_kernel = 3;
  } else if (which == "layernorm") {
    c.norm = NormKind::kLayer;
  } else if (which == "dprnn") {
    c.block = BlockKind::kDprnn;
    c.dprnn_hidden = matched_dprnn_hidden(c.hidden);
  } else if (which == "dpt") {
    c.block = BlockKind::kDpt;
    c.dpt_lookbehind = 31;
  } else {
    throw Error(ErrorCode::kUnknownVariant, "unknown variant '" + std::string(which) + "'");
  }
  c.variant = std::string(which);
  return c;
}

}  // namespace streamenh
