// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamenh/dsp/stft.hpp"
#include "streamenh/io/weights.hpp"
#include "streamenh/kernels.hpp"
#include "streamenh/model/graph.hpp"
#include "streamenh/model/mask.hpp"
#include "streamenh/runtime/stream_state.hpp"
#include "streamenh/variants/dprnn.hpp"

namespace streamenh {

/// Batch norm, layer norm, or nothing (batch norm folded away).
struct NormOp {
  enum class Kind { kNone, kBatch, kLayer };
  Kind kind = Kind::kNone;
  BatchNormParams<float> bn;
  LayerNormParams<float> ln;

  bool present() const { return kind != Kind::kNone; }
  void apply(FeatureMap& x) const;
};

/// One encoder (conv) or decoder (deconv) stage: convolution, norm, PReLU.
struct ConvStage {
  std::string name;
  bool transposed = false;
  int in_bins = 0;
  int out_bins = 0;
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 3;
  int stride = 1;
  int padding = 1;
  /// One matrix per time tap, oldest first; the last tap sees the current
  /// frame. Conv taps are [(kernel * in) x out], deconv taps
  /// [in x (kernel * out)].
  std::vector<FeatureMap> taps;
  Vector<float> bias;
  NormOp norm;
  Vector<float> slope;

  int time_kernel() const { return static_cast<int>(taps.size()); }
};

struct BlockOp {
  BlockKind kind = BlockKind::kRnnFormer;
  NormOp time_norm;
  GruWeights<float> gru;           // kRnnFormer, kDprnn
  LinearWeights<float> time_proj;  // kRnnFormer, kDprnn
  MhsaWeights<float> time_attention;  // kDpt
  int window = 0;                     // kDpt cache capacity
  NormOp freq_norm;
  MhsaWeights<float> freq_attention;  // kRnnFormer, kDpt
  BiGruWeights<float> freq_gru;       // kDprnn
};

/// A graph with its weights bound into typed operators. Immutable after
/// construction and safe to share across threads; each stream owns a
/// StreamState from make_state().
class Network {
 public:
  /// Validates the bundle against the graph (Error kShapeMismatch).
  Network(ModelGraph graph, const WeightBundle& weights);
  /// Uses the bundle's embedded config and fusion state.
  explicit Network(const WeightBundle& weights);

  const ModelGraph& graph() const { return graph_; }
  const ModelConfig& config() const { return graph_.config; }
  const Stft& stft() const { return stft_; }
  std::uint64_t signature() const { return signature_; }

  StreamState make_state() const;

  /// Spectrum -> complex mask for one frame. Touches only `state`.
  void forward_frame(StreamState& state, const ComplexSpectrum& spectrum,
                     MaskFrame& mask) const;
  MaskFrame forward_frame(StreamState& state, const ComplexSpectrum& spectrum) const;

  const std::vector<ConvStage>& encoders() const { return encoders_; }
  /// Decoder stages in execution order (deepest first); decoders()[j]
  /// mirrors encoders()[n - 1 - j].
  const std::vector<ConvStage>& decoders() const { return decoders_; }
  const std::vector<BlockOp>& blocks() const { return blocks_; }
  const std::optional<LinearWeights<float>>& proj_in() const { return proj_in_; }
  const std::optional<LinearWeights<float>>& proj_out() const { return proj_out_; }
  const LinearWeights<float>& head() const { return head_; }

 private:
  void bind(const WeightBundle& weights);
  void run_block(const BlockOp& block, std::size_t index, StreamState& state) const;

  ModelGraph graph_;
  Stft stft_;
  std::uint64_t signature_ = 0;
  std::vector<ConvStage> encoders_;
  std::vector<ConvStage> decoders_;
  std::vector<BlockOp> blocks_;
  std::optional<LinearWeights<float>> proj_in_;
  std::optional<LinearWeights<float>> proj_out_;
  LinearWeights<float> head_;
};

/// Copies spectrum bins into the [bins x 2] (real, imag) network input.
void featurize(const ComplexSpectrum& spectrum, FeatureMap& out);

}  // namespace streamenh
