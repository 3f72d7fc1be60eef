// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/runtime/stream_state.hpp"

#include <cstring>

namespace streamenh {

namespace {

template <typename M>
std::size_t bytes_of(const M& m) {
  return sizeof(typename M::Scalar) * static_cast<std::size_t>(m.size());
}

template <typename M>
bool bits_equal(const M& a, const M& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), bytes_of(a)) == 0;
}

void zero_scratch(FrameWorkspace& ws) {
  ws.spectrum.setZero();
  ws.masked.setZero();
  ws.mask.setZero();
  ws.input.setZero();
  for (auto* stages : {&ws.enc, &ws.dec})
    for (auto& s : *stages) {
      s.in.setZero();
      s.cols.setZero();
      s.out.setZero();
    }
  ws.stream.setZero();
  ws.bottleneck.setZero();
  ws.head.setZero();
}

std::size_t scratch_bytes(const FrameWorkspace& ws) {
  std::size_t n = bytes_of(ws.spectrum) + bytes_of(ws.masked) + bytes_of(ws.mask) +
                  bytes_of(ws.input) + bytes_of(ws.stream) + bytes_of(ws.bottleneck) +
                  bytes_of(ws.head);
  for (const auto* stages : {&ws.enc, &ws.dec})
    for (const auto& s : *stages) n += bytes_of(s.in) + bytes_of(s.cols) + bytes_of(s.out);
  const BlockScratch& b = ws.block;
  n += bytes_of(b.normed) + bytes_of(b.branch) + bytes_of(b.gru.gi) + bytes_of(b.gru.gh) +
       bytes_of(b.mhsa.qkv) + bytes_of(b.mhsa.scores) + bytes_of(b.mhsa.context) +
       bytes_of(b.time_attention.qkv) + bytes_of(b.time_attention.scores) +
       bytes_of(b.time_attention.context) + bytes_of(b.freq_gru.gi_fwd) +
       bytes_of(b.freq_gru.gi_bwd) + bytes_of(b.freq_gru.gh) + bytes_of(b.freq_gru.h) +
       bytes_of(b.freq_gru.hidden);
  return n;
}

}  // namespace

void StreamState::reset() {
  stft.reset();
  for (auto& h : gru_hidden) h.setZero();
  for (auto& c : enc_cache) c.reset();
  for (auto& c : dec_cache) c.reset();
  for (auto& c : kv) c.reset();
  frames = 0;
  zero_scratch(ws);
}

std::size_t StreamState::carried_bytes() const {
  std::size_t n = bytes_of(stft.history) + bytes_of(stft.ola);
  for (const auto& h : gru_hidden) n += bytes_of(h);
  for (const auto& c : enc_cache) n += c.bytes();
  for (const auto& c : dec_cache) n += c.bytes();
  for (const auto& c : kv) n += c.bytes();
  return n;
}

std::size_t StreamState::total_bytes() const {
  return carried_bytes() + bytes_of(stft.frame) + scratch_bytes(ws);
}

bool StreamState::carried_equal(const StreamState& other) const {
  if (frames != other.frames || signature != other.signature) return false;
  if (!bits_equal(stft.history, other.stft.history) || !bits_equal(stft.ola, other.stft.ola))
    return false;
  if (gru_hidden.size() != other.gru_hidden.size()) return false;
  for (std::size_t i = 0; i < gru_hidden.size(); ++i)
    if (!bits_equal(gru_hidden[i], other.gru_hidden[i])) return false;
  return enc_cache == other.enc_cache && dec_cache == other.dec_cache && kv == other.kv;
}

}  // namespace streamenh
