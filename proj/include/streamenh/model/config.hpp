// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "streamenh/dsp/stft.hpp"

namespace streamenh {

enum class NormKind { kBatch, kLayer };

/// Internals of each dual-path block.
///  kRnnFormer: time GRU + frequency self-attention.
///  kDprnn:     time GRU + bidirectional frequency GRU.
///  kDpt:       cached time self-attention + frequency self-attention.
enum class BlockKind { kRnnFormer, kDprnn, kDpt };

/// Full architectural description of one network.
///
/// The encoder is a chain of frequency-axis convolutions (kernel 3, padding 1)
/// with the given strides; the decoder mirrors it with transposed
/// convolutions and additive skip connections. Between them sit `n_blocks`
/// dual-path blocks of width `hidden`, entered and left through 1x1
/// projections when `hidden` differs from the last encoder width.
struct ModelConfig {
  std::string preset = "custom";
  std::string variant = "base";
  StftConfig stft;
  std::vector<int> enc_channels;
  std::vector<int> enc_strides;
  int n_blocks = 0;
  int hidden = 0;
  int n_heads = 1;
  NormKind norm = NormKind::kBatch;
  int time_kernel = 1;
  BlockKind block = BlockKind::kRnnFormer;
  int dpt_lookbehind = 31;
  int dprnn_hidden = 0;  // frequency-GRU width, used when block == kDprnn
  float norm_eps = 1e-5f;

  /// Throws Error(kConfig) on inconsistent fields.
  void validate() const;

  /// Frequency positions entering the network (all STFT bins).
  int input_bins() const { return stft.bins(); }
  /// Frequency positions inside the dual-path blocks.
  int block_bins() const;
  /// Channel width after the encoder (2 when there is no encoder).
  int encoder_width() const;
  bool has_projections() const {
    return n_blocks > 0 && hidden != encoder_width();
  }

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

/// Names of the built-in presets, smallest first.
const std::vector<std::string>& preset_names();

/// One of "T", "B", "S", "M", "L"; throws Error(kUnknownPreset).
ModelConfig preset_config(std::string_view name);

/// Ablation tags accepted by make_variant, "base" first.
const std::vector<std::string>& variant_names();

/// Applies an ablation to a preset config:
///  k3        time kernel 3 on every kernel-3 encoder/decoder convolution
///  layernorm every batch norm replaced by a layer norm
///  dprnn     frequency attention replaced by a bidirectional frequency GRU
///  dpt       time GRU replaced by cached time attention (31 frames back)
/// "base" returns the config unchanged. Throws Error(kUnknownVariant).
ModelConfig make_variant(const ModelConfig& base, std::string_view which);

/// Frequency-GRU width whose parameter count best matches the frequency
/// attention it replaces at width `hidden`.
int matched_dprnn_hidden(int hidden);

}  // namespace streamenh
