// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <vector>

#include "streamenh/dsp/stft.hpp"
#include "streamenh/kernels/attention.hpp"
#include "streamenh/kernels/gru.hpp"
#include "streamenh/model/mask.hpp"
#include "streamenh/variants/dprnn.hpp"
#include "streamenh/variants/kv_cache.hpp"
#include "streamenh/variants/time_conv.hpp"

namespace streamenh {

struct StageScratch {
  FeatureMap in;    // decoder: previous output + skip
  FeatureMap cols;  // conv im2col / deconv tap products
  FeatureMap out;
};

struct BlockScratch {
  FeatureMap normed;
  FeatureMap branch;
  GruScratch<float> gru;
  MhsaScratch<float> mhsa;
  TimeAttentionScratch<float> time_attention;
  BiGruScratch<float> freq_gru;
};

/// Preallocated per-frame buffers, sized once for the owning network.
struct FrameWorkspace {
  ComplexSpectrum spectrum;
  ComplexSpectrum masked;
  MaskFrame mask;
  FeatureMap input;
  std::vector<StageScratch> enc;
  std::vector<StageScratch> dec;
  FeatureMap stream;      // residual stream through the blocks
  FeatureMap bottleneck;  // decoder entry
  BlockScratch block;
  FeatureMap head;
};

/// Everything a stream carries between frames, plus its scratch. Created by
/// Network::make_state(); its size is fixed at creation.
struct StreamState {
  StftState stft;
  std::vector<FeatureMap> gru_hidden;  // per block, [positions x hidden]
  std::vector<TimeConvCache<float>> enc_cache;
  std::vector<TimeConvCache<float>> dec_cache;
  std::vector<KvCache<float>> kv;
  std::int64_t frames = 0;
  std::uint64_t signature = 0;  // identifies the owning network
  FrameWorkspace ws;

  /// Back to the freshly created condition.
  void reset();

  /// Bytes of carried state (sample buffers, hidden vectors, caches).
  std::size_t carried_bytes() const;
  /// Carried state plus scratch.
  std::size_t total_bytes() const;

  /// Bitwise comparison of the carried state.
  bool carried_equal(const StreamState& other) const;
};

}  // namespace streamenh
