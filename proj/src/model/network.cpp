// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/model/network.hpp"

#include <functional>

namespace streamenh {

void NormOp::apply(FeatureMap& x) const {
  switch (kind) {
    case Kind::kNone: return;
    case Kind::kBatch: batchnorm_infer(x, bn, x); return;
    case Kind::kLayer: layernorm(x, ln, x); return;
  }
}

void featurize(const ComplexSpectrum& spectrum, FeatureMap& out) {
  if (out.rows() != spectrum.size() || out.cols() != 2)
    throw Error(ErrorCode::kInputSize, "spectrum bin count does not match network input");
  for (Eigen::Index f = 0; f < spectrum.size(); ++f) {
    out(f, 0) = spectrum[f].real();
    out(f, 1) = spectrum[f].imag();
  }
}

namespace {

using ConstMap = Eigen::Map<const RowMatrix<float>>;
using ConstVecMap = Eigen::Map<const Vector<float>>;

class Binder {
 public:
  Binder(const ModelGraph& g, const WeightBundle& w) : graph_(g), weights_(w) {}

  std::span<const float> tensor(const std::string& name) const {
    return weights_.at(name).values();
  }

  Vector<float> vec(const std::string& name) const {
    auto t = tensor(name);
    return ConstVecMap(t.data(), static_cast<Eigen::Index>(t.size()));
  }

  NormOp norm(const std::string& name) const {
    NormOp op;
    const LayerSpec* l = graph_.find(name);
    if (!l) return op;
    const float eps = graph_.config.norm_eps;
    if (l->kind == LayerKind::kBatchNorm) {
      op.kind = NormOp::Kind::kBatch;
      op.bn.gamma = vec(name + ".gamma");
      op.bn.beta = vec(name + ".beta");
      op.bn.running_mean = vec(name + ".running_mean");
      op.bn.running_var = vec(name + ".running_var");
      op.bn.eps = eps;
    } else {
      op.kind = NormOp::Kind::kLayer;
      op.ln.gamma = vec(name + ".gamma");
      op.ln.beta = vec(name + ".beta");
      op.ln.eps = eps;
    }
    return op;
  }

  // 1x1 conv [1 x in x out] as a position-wise linear map.
  LinearWeights<float> pointwise(const std::string& name) const {
    const LayerSpec& l = *graph_.find(name);
    LinearWeights<float> lin;
    lin.in_features = l.in.channels;
    lin.out_features = l.out.channels;
    lin.w_t = ConstMap(tensor(name + ".weight").data(), l.in.channels, l.out.channels);
    lin.bias = vec(name + ".bias");
    return lin;
  }

  LinearWeights<float> linear(const std::string& name) const {
    const LayerSpec& l = *graph_.find(name);
    return LinearWeights<float>::from_tensor(tensor(name + ".weight"), tensor(name + ".bias"),
                                             l.in.channels, l.out.channels);
  }

  GruWeights<float> gru(const std::string& prefix, int input, int hidden) const {
    return GruWeights<float>::from_tensors(tensor(prefix + "w_ih"), tensor(prefix + "w_hh"),
                                           tensor(prefix + "b_ih"), tensor(prefix + "b_hh"),
                                           input, hidden);
  }

  MhsaWeights<float> attention(const std::string& name, int channels, int heads) const {
    const std::string p = name + ".";
    return MhsaWeights<float>::from_tensors(
        tensor(p + "w_q"), tensor(p + "b_q"), tensor(p + "w_k"), tensor(p + "b_k"),
        tensor(p + "w_v"), tensor(p + "b_v"), tensor(p + "w_o"), tensor(p + "b_o"),
        channels, heads);
  }

  ConvStage stage(const std::string& prefix, bool transposed) const {
    const LayerSpec& l = *graph_.find(prefix + (transposed ? "deconv" : "conv"));
    ConvStage s;
    s.name = prefix.substr(0, prefix.size() - 1);
    s.transposed = transposed;
    s.in_bins = l.in.bins;
    s.out_bins = l.out.bins;
    s.in_channels = l.in.channels;
    s.out_channels = l.out.channels;
    s.kernel = l.kernel;
    s.stride = l.stride;
    s.padding = l.padding;
    auto w = tensor(l.name + ".weight");
    const Eigen::Index tap_size = Eigen::Index(l.kernel) * l.in.channels * l.out.channels;
    for (int t = 0; t < l.time_kernel; ++t) {
      const float* data = w.data() + t * tap_size;
      if (transposed)
        s.taps.push_back(ConstMap(data, l.kernel * l.out.channels, l.in.channels).transpose());
      else
        s.taps.push_back(ConstMap(data, l.kernel * l.in.channels, l.out.channels));
    }
    s.bias = vec(l.name + ".bias");
    s.norm = norm(prefix + "norm");
    s.slope = vec(prefix + "act.slope");
    return s;
  }

 private:
  const ModelGraph& graph_;
  const WeightBundle& weights_;
};

}  // namespace

Network::Network(ModelGraph graph, const WeightBundle& weights)
    : graph_(std::move(graph)), stft_(graph_.config.stft) {
  validate_against_graph(weights, graph_);
  nlohmann::json sig = graph_.config;
  sig["fused"] = graph_.fused;
  signature_ = std::hash<std::string>{}(sig.dump());
  bind(weights);
}

Network::Network(const WeightBundle& weights) : Network(graph_for(weights), weights) {}

void Network::bind(const WeightBundle& weights) {
  const ModelConfig& c = graph_.config;
  Binder b(graph_, weights);
  const int n = static_cast<int>(c.enc_channels.size());
  for (int i = 0; i < n; ++i)
    encoders_.push_back(b.stage("enc" + std::to_string(i) + ".", false));
  if (c.n_blocks > 0 && c.has_projections()) {
    proj_in_ = b.pointwise("proj_in");
    proj_out_ = b.pointwise("proj_out");
  }
  const int h = c.hidden;
  for (int k = 0; k < c.n_blocks; ++k) {
    const std::string pre = "block" + std::to_string(k) + ".";
    BlockOp op;
    op.kind = c.block;
    op.time_norm = b.norm(pre + "time_norm");
    if (c.block == BlockKind::kDpt) {
      op.time_attention = b.attention(pre + "tmhsa", h, c.n_heads);
      op.window = c.dpt_lookbehind + 1;
    } else {
      op.gru = b.gru(pre + "gru.", h, h);
      op.time_proj = b.linear(pre + "time_proj");
    }
    op.freq_norm = b.norm(pre + "freq_norm");
    if (c.block == BlockKind::kDprnn) {
      op.freq_gru.forward = b.gru(pre + "fgru.fwd.", h, c.dprnn_hidden);
      op.freq_gru.backward = b.gru(pre + "fgru.bwd.", h, c.dprnn_hidden);
      op.freq_gru.proj = b.linear(pre + "freq_proj");
    } else {
      op.freq_attention = b.attention(pre + "mhsa", h, c.n_heads);
    }
    blocks_.push_back(std::move(op));
  }
  for (int i = n - 1; i >= 0; --i)
    decoders_.push_back(b.stage("dec" + std::to_string(i) + ".", true));
  head_ = b.pointwise("head");
}

StreamState Network::make_state() const {
  const ModelConfig& c = graph_.config;
  StreamState s;
  s.signature = signature_;
  s.stft = stft_.make_state();
  const int bins = c.input_bins();
  const int block_bins = c.block_bins();
  const int h = c.hidden;
  for (const auto& e : encoders_) {
    if (e.time_kernel() > 1)
      s.enc_cache.emplace_back(e.time_kernel(), e.in_bins, e.in_channels);
    StageScratch sc;
    sc.cols = FeatureMap::Zero(e.out_bins, e.kernel * e.in_channels);
    sc.out = FeatureMap::Zero(e.out_bins, e.out_channels);
    s.ws.enc.push_back(std::move(sc));
  }
  for (const auto& d : decoders_) {
    if (d.time_kernel() > 1)
      s.dec_cache.emplace_back(d.time_kernel(), d.in_bins, d.in_channels);
    StageScratch sc;
    sc.in = FeatureMap::Zero(d.in_bins, d.in_channels);
    sc.cols = FeatureMap::Zero(d.in_bins, d.kernel * d.out_channels);
    sc.out = FeatureMap::Zero(d.out_bins, d.out_channels);
    s.ws.dec.push_back(std::move(sc));
  }
  for (const auto& blk : blocks_) {
    if (blk.kind == BlockKind::kDpt) {
      s.gru_hidden.emplace_back();
      s.kv.emplace_back(blk.window, block_bins, h);
    } else {
      s.gru_hidden.push_back(FeatureMap::Zero(block_bins, h));
      s.kv.emplace_back();
    }
  }
  FrameWorkspace& ws = s.ws;
  ws.spectrum = ComplexSpectrum::Zero(bins);
  ws.masked = ComplexSpectrum::Zero(bins);
  ws.mask = MaskFrame::Zero(bins);
  ws.input = FeatureMap::Zero(bins, 2);
  if (c.n_blocks > 0) {
    ws.stream = FeatureMap::Zero(block_bins, h);
    ws.bottleneck = FeatureMap::Zero(block_bins, c.encoder_width());
    BlockScratch& b = ws.block;
    b.normed = FeatureMap::Zero(block_bins, h);
    b.branch = FeatureMap::Zero(block_bins, h);
    b.gru.resize(block_bins, h);
    b.mhsa.resize(block_bins, h);
    if (c.block == BlockKind::kDpt) b.time_attention.resize(block_bins, h, c.dpt_lookbehind + 1);
    if (c.block == BlockKind::kDprnn) b.freq_gru.resize(block_bins, c.dprnn_hidden);
  }
  ws.head = FeatureMap::Zero(bins, 2);
  return s;
}

void Network::run_block(const BlockOp& block, std::size_t index, StreamState& state) const {
  BlockScratch& s = state.ws.block;
  FeatureMap& x = state.ws.stream;

  const FeatureMap* src = &x;
  if (block.time_norm.present()) {
    s.normed = x;
    block.time_norm.apply(s.normed);
    src = &s.normed;
  }
  if (block.kind == BlockKind::kDpt) {
    dpt_time_step(*src, state.kv[index], block.time_attention, s.time_attention, s.branch);
  } else {
    FeatureMap& hidden = state.gru_hidden[index];
    gru_step(*src, hidden, block.gru, s.gru);
    linear(hidden, block.time_proj, s.branch);
  }
  x += s.branch;

  src = &x;
  if (block.freq_norm.present()) {
    s.normed = x;
    block.freq_norm.apply(s.normed);
    src = &s.normed;
  }
  if (block.kind == BlockKind::kDprnn)
    dprnn_freq_step(*src, block.freq_gru, s.freq_gru, s.branch);
  else
    mhsa_freq(*src, block.freq_attention, s.mhsa, s.branch);
  x += s.branch;
}

void Network::forward_frame(StreamState& state, const ComplexSpectrum& spectrum,
                            MaskFrame& mask) const {
  if (state.signature != signature_)
    throw Error(ErrorCode::kStateMismatch, "stream state was created for another network");
  FrameWorkspace& ws = state.ws;
  featurize(spectrum, ws.input);

  const FeatureMap* cur = &ws.input;
  std::size_t enc_cache = 0;
  for (std::size_t i = 0; i < encoders_.size(); ++i) {
    const ConvStage& e = encoders_[i];
    StageScratch& sc = ws.enc[i];
    if (e.time_kernel() == 1) {
      sc.out.rowwise() = e.bias.transpose();
      conv_freq_accumulate(*cur, e.taps[0], e.kernel, e.stride, e.padding, sc.cols, sc.out);
    } else {
      timeconv3_step(*cur, state.enc_cache[enc_cache++], e.taps, e.bias, e.kernel, e.stride,
                     e.padding, sc.cols, sc.out);
    }
    e.norm.apply(sc.out);
    prelu_inplace(sc.out, e.slope);
    cur = &sc.out;
  }

  if (!blocks_.empty()) {
    if (proj_in_)
      linear(*cur, *proj_in_, ws.stream);
    else
      ws.stream = *cur;
    for (std::size_t b = 0; b < blocks_.size(); ++b) run_block(blocks_[b], b, state);
    if (proj_out_) {
      linear(ws.stream, *proj_out_, ws.bottleneck);
      cur = &ws.bottleneck;
    } else {
      cur = &ws.stream;
    }
  }

  std::size_t dec_cache = 0;
  const std::size_t n = encoders_.size();
  for (std::size_t j = 0; j < decoders_.size(); ++j) {
    const ConvStage& d = decoders_[j];
    StageScratch& sc = ws.dec[j];
    sc.in = *cur + ws.enc[n - 1 - j].out;
    if (d.time_kernel() == 1) {
      sc.out.rowwise() = d.bias.transpose();
      deconv_freq_accumulate(sc.in, d.taps[0], d.kernel, d.stride, d.padding, sc.cols, sc.out);
    } else {
      timedeconv3_step(sc.in, state.dec_cache[dec_cache++], d.taps, d.bias, d.kernel, d.stride,
                       d.padding, sc.cols, sc.out);
    }
    d.norm.apply(sc.out);
    prelu_inplace(sc.out, d.slope);
    cur = &sc.out;
  }

  linear(*cur, head_, ws.head);
  bound_mask(ws.head, mask);
  ++state.frames;
}

MaskFrame Network::forward_frame(StreamState& state, const ComplexSpectrum& spectrum) const {
  MaskFrame mask(spectrum.size());
  forward_frame(state, spectrum, mask);
  return mask;
}

}  // namespace streamenh
