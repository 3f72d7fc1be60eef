// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Randomized comparisons of every kernel against its naive twin. Each sweep
// draws `cases` shapes and returns the worst scaled error.

#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "oracles/naive.hpp"
#include "streamenh/dsp/fft.hpp"
#include "streamenh/kernels.hpp"
#include "streamenh/model/mask.hpp"
#include "streamenh/variants/dprnn.hpp"
#include "streamenh/variants/kv_cache.hpp"
#include "streamenh/variants/time_conv.hpp"
#include "support.hpp"

namespace sweeps {

using namespace streamenh;
using oracle::Mat;
using testing::scaled_error;
using testing::to_eigen;
using testing::to_float;

struct SweepResult {
  std::string kernel;
  int cases = 0;
  double worst = 0;
};

inline Vector<float> vec(const std::vector<double>& v) {
  Vector<float> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[Eigen::Index(i)] = float(v[i]);
  return out;
}

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline void track(SweepResult& r, double err) {
  ++r.cases;
  if (!(err <= r.worst)) r.worst = err;
}

inline SweepResult conv_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"conv_freq"};
  for (int c = 0; c < cases; ++c) {
    const int k = pick(rng, 1, 5), stride = pick(rng, 1, 3), pad = pick(rng, 0, k - 1);
    const int bins = pick(rng, k, 40), cin = pick(rng, 1, 24), cout = pick(rng, 1, 24);
    const Mat x = oracle::random_mat(rng, bins, cin);
    const auto w = oracle::uniform(rng, std::size_t(k) * cin * cout);
    const auto b = oracle::uniform(rng, cout);
    auto cw = ConvWeights<float>::from_tensor(to_float(w), to_float(b), k, cin, cout);
    track(r, scaled_error(conv_freq(to_eigen(x), cw, stride, pad), oracle::conv(x, w, b, k, stride, pad)));
  }
  return r;
}

inline SweepResult deconv_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"deconv_freq"};
  for (int c = 0; c < cases; ++c) {
    const int k = pick(rng, 1, 5), stride = pick(rng, 1, 3), pad = pick(rng, 0, k - 1);
    const int bins = pick(rng, 2, 40), cin = pick(rng, 1, 24), cout = pick(rng, 1, 24);
    const int min_out = (bins - 1) * stride + k - 2 * pad;
    if (min_out < 1) {
      --c;
      continue;
    }
    const int out_bins = min_out + pick(rng, 0, stride - 1);
    const Mat x = oracle::random_mat(rng, bins, cin);
    const auto w = oracle::uniform(rng, std::size_t(k) * cin * cout);
    const auto b = oracle::uniform(rng, cout);
    auto dw = DeconvWeights<float>::from_tensor(to_float(w), to_float(b), k, cin, cout);
    track(r, scaled_error(deconv_freq(to_eigen(x), dw, stride, pad, out_bins),
                          oracle::deconv(x, w, b, k, stride, pad, out_bins)));
  }
  return r;
}

inline SweepResult linear_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"linear"};
  for (int c = 0; c < cases; ++c) {
    const int rows = pick(rng, 1, 40), in = pick(rng, 1, 64), out = pick(rng, 1, 64);
    const Mat x = oracle::random_mat(rng, rows, in);
    const auto w = oracle::uniform(rng, std::size_t(in) * out), b = oracle::uniform(rng, out);
    auto lw = LinearWeights<float>::from_tensor(to_float(w), to_float(b), in, out);
    FeatureMap y(rows, out);
    linear(to_eigen(x), lw, y);
    track(r, scaled_error(y, oracle::linear(x, w, b)));
  }
  return r;
}

inline oracle::Gru random_gru(std::mt19937_64& rng, int input, int hidden) {
  oracle::Gru g;
  g.input = input;
  g.hidden = hidden;
  g.w_ih = oracle::uniform(rng, std::size_t(3) * hidden * input);
  g.w_hh = oracle::uniform(rng, std::size_t(3) * hidden * hidden);
  g.b_ih = oracle::uniform(rng, 3 * hidden);
  g.b_hh = oracle::uniform(rng, 3 * hidden);
  return g;
}

inline GruWeights<float> engine_gru(const oracle::Gru& g) {
  return GruWeights<float>::from_tensors(to_float(g.w_ih), to_float(g.w_hh), to_float(g.b_ih),
                                         to_float(g.b_hh), g.input, g.hidden);
}

inline SweepResult gru_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"gru_step"};
  for (int c = 0; c < cases; ++c) {
    const int positions = pick(rng, 1, 20), input = pick(rng, 1, 32), hidden = pick(rng, 1, 32);
    const auto g = random_gru(rng, input, hidden);
    Mat x = oracle::random_mat(rng, positions, input);
    Mat h = oracle::random_mat(rng, positions, hidden);
    FeatureMap he = to_eigen(h);
    const auto w = engine_gru(g);
    GruScratch<float> s;
    s.resize(positions, hidden);
    // A few recurrent steps so errors would compound.
    for (int step = 0; step < 3; ++step) {
      gru_step(to_eigen(x), he, w, s);
      h = oracle::gru_rows(g, x, h);
      x = oracle::random_mat(rng, positions, input);
    }
    track(r, scaled_error(he, h));
  }
  return r;
}

inline oracle::Attention random_attention(std::mt19937_64& rng, int channels, int heads) {
  const std::size_t cc = std::size_t(channels) * channels;
  const double a = 1.0 / std::sqrt(double(channels));
  oracle::Attention at;
  at.heads = heads;
  at.wq = oracle::uniform(rng, cc, -a, a);
  at.bq = oracle::uniform(rng, channels, -a, a);
  at.wk = oracle::uniform(rng, cc, -a, a);
  at.bk = oracle::uniform(rng, channels, -a, a);
  at.wv = oracle::uniform(rng, cc, -a, a);
  at.bv = oracle::uniform(rng, channels, -a, a);
  at.wo = oracle::uniform(rng, cc, -a, a);
  at.bo = oracle::uniform(rng, channels, -a, a);
  return at;
}

inline MhsaWeights<float> engine_attention(const oracle::Attention& a, int channels) {
  return MhsaWeights<float>::from_tensors(to_float(a.wq), to_float(a.bq), to_float(a.wk),
                                          to_float(a.bk), to_float(a.wv), to_float(a.bv),
                                          to_float(a.wo), to_float(a.bo), channels, a.heads);
}

inline SweepResult mhsa_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"mhsa_freq"};
  for (int c = 0; c < cases; ++c) {
    const int heads = pick(rng, 1, 4), d = pick(rng, 1, 12), channels = heads * d;
    const int tokens = pick(rng, 1, 40);
    const auto a = random_attention(rng, channels, heads);
    const Mat x = oracle::random_mat(rng, tokens, channels);
    track(r, scaled_error(mhsa_freq(to_eigen(x), engine_attention(a, channels)),
                          oracle::attend(a, x, x)));
  }
  return r;
}

inline SweepResult batchnorm_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"batchnorm_infer"};
  for (int c = 0; c < cases; ++c) {
    const int rows = pick(rng, 1, 40), ch = pick(rng, 1, 48);
    const Mat x = oracle::random_mat(rng, rows, ch, -3, 3);
    const auto g = oracle::uniform(rng, ch, 0.5, 1.5), b = oracle::uniform(rng, ch);
    const auto m = oracle::uniform(rng, ch), v = oracle::uniform(rng, ch, 0.1, 2.0);
    const BatchNormParams<float> p{vec(g), vec(b), vec(m), vec(v), 1e-5f};
    track(r, scaled_error(batchnorm_infer(to_eigen(x), p), oracle::batchnorm(x, g, b, m, v, double(1e-5f))));
  }
  return r;
}

inline SweepResult layernorm_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"layernorm"};
  for (int c = 0; c < cases; ++c) {
    const int rows = pick(rng, 1, 40), ch = pick(rng, 2, 48);
    const Mat x = oracle::random_mat(rng, rows, ch, -3, 3);
    const auto g = oracle::uniform(rng, ch, 0.5, 1.5), b = oracle::uniform(rng, ch);
    const LayerNormParams<float> p{vec(g), vec(b), 1e-5f};
    track(r, scaled_error(layernorm(to_eigen(x), p), oracle::layernorm(x, g, b, double(1e-5f))));
  }
  return r;
}

inline SweepResult prelu_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"prelu"};
  for (int c = 0; c < cases; ++c) {
    const int rows = pick(rng, 1, 40), ch = pick(rng, 1, 48);
    const Mat x = oracle::random_mat(rng, rows, ch);
    const auto s = oracle::uniform(rng, ch);
    FeatureMap y = to_eigen(x);
    prelu_inplace(y, vec(s));
    track(r, scaled_error(y, oracle::prelu(x, s)));
  }
  return r;
}

inline SweepResult dprnn_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"dprnn_freq_step"};
  for (int c = 0; c < cases; ++c) {
    const int positions = pick(rng, 1, 24), input = pick(rng, 1, 24), g = pick(rng, 1, 16);
    const int out = pick(rng, 1, 24);
    const auto fwd = random_gru(rng, input, g), bwd = random_gru(rng, input, g);
    const auto pw = oracle::uniform(rng, std::size_t(out) * 2 * g), pb = oracle::uniform(rng, out);
    const Mat x = oracle::random_mat(rng, positions, input);
    BiGruWeights<float> w{engine_gru(fwd), engine_gru(bwd),
                          LinearWeights<float>::from_tensor(to_float(pw), to_float(pb), 2 * g, out)};
    BiGruScratch<float> s;
    s.resize(positions, g);
    FeatureMap y(positions, out);
    dprnn_freq_step(to_eigen(x), w, s, y);
    track(r, scaled_error(y, oracle::bigru_rows(fwd, bwd, pw, pb, x)));
  }
  return r;
}

inline SweepResult dpt_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"dpt_time_step"};
  for (int c = 0; c < cases; ++c) {
    const int heads = pick(rng, 1, 4), d = pick(rng, 1, 8), channels = heads * d;
    const int positions = pick(rng, 1, 8), window = pick(rng, 1, 6), frames = pick(rng, 1, 12);
    const auto a = random_attention(rng, channels, heads);
    oracle::Seq xs;
    for (int t = 0; t < frames; ++t) xs.push_back(oracle::random_mat(rng, positions, channels));
    const auto ref = oracle::time_attention(a, xs, window);
    const auto w = engine_attention(a, channels);
    KvCache<float> cache(window, positions, channels);
    TimeAttentionScratch<float> s;
    s.resize(positions, channels, window);
    FeatureMap y(positions, channels);
    double worst = 0;
    for (int t = 0; t < frames; ++t) {
      dpt_time_step(to_eigen(xs[t]), cache, w, s, y);
      worst = std::max(worst, scaled_error(y, ref[t]));
    }
    track(r, worst);
  }
  return r;
}

inline SweepResult timeconv_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"timeconv3_step"};
  for (int c = 0; c < cases; ++c) {
    const int tk = pick(rng, 1, 3), k = 3, stride = pick(rng, 1, 2), pad = 1;
    const int bins = pick(rng, 3, 24), cin = pick(rng, 1, 12), cout = pick(rng, 1, 12);
    const int frames = pick(rng, 1, 6);
    const auto w = oracle::uniform(rng, std::size_t(tk) * k * cin * cout), b = oracle::uniform(rng, cout);
    oracle::Seq xs;
    for (int t = 0; t < frames; ++t) xs.push_back(oracle::random_mat(rng, bins, cin));
    const auto ref = oracle::timeconv(xs, w, b, tk, k, stride, pad);
    std::vector<FeatureMap> taps;
    const auto wf = to_float(w);
    for (int t = 0; t < tk; ++t)
      taps.push_back(Eigen::Map<const FeatureMap>(wf.data() + std::size_t(t) * k * cin * cout, k * cin, cout));
    const Vector<float> bias = vec(b);
    TimeConvCache<float> cache(tk, bins, cin);
    const int out_bins = conv_output_size(bins, k, stride, pad);
    FeatureMap cols(out_bins, k * cin), y(out_bins, cout);
    double worst = 0;
    for (int t = 0; t < frames; ++t) {
      timeconv3_step(to_eigen(xs[t]), cache, taps, bias, k, stride, pad, cols, y);
      worst = std::max(worst, scaled_error(y, ref[t]));
    }
    track(r, worst);
  }
  return r;
}

inline SweepResult timedeconv_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"timedeconv3_step"};
  for (int c = 0; c < cases; ++c) {
    const int tk = pick(rng, 1, 3), k = 3, stride = pick(rng, 1, 2), pad = 1;
    const int bins = pick(rng, 2, 24), cin = pick(rng, 1, 12), cout = pick(rng, 1, 12);
    const int out_bins = (bins - 1) * stride + k - 2 * pad;
    const int frames = pick(rng, 1, 6);
    const auto w = oracle::uniform(rng, std::size_t(tk) * k * cin * cout), b = oracle::uniform(rng, cout);
    oracle::Seq xs;
    for (int t = 0; t < frames; ++t) xs.push_back(oracle::random_mat(rng, bins, cin));
    const auto ref = oracle::timedeconv(xs, w, b, tk, k, stride, pad, out_bins);
    std::vector<FeatureMap> taps;
    const auto wf = to_float(w);
    for (int t = 0; t < tk; ++t)
      taps.push_back(Eigen::Map<const FeatureMap>(wf.data() + std::size_t(t) * k * cin * cout, k * cout, cin)
                         .transpose());
    const Vector<float> bias = vec(b);
    TimeConvCache<float> cache(tk, bins, cin);
    FeatureMap products(bins, k * cout), y(out_bins, cout);
    double worst = 0;
    for (int t = 0; t < frames; ++t) {
      timedeconv3_step(to_eigen(xs[t]), cache, taps, bias, k, stride, pad, products, y);
      worst = std::max(worst, scaled_error(y, ref[t]));
    }
    track(r, worst);
  }
  return r;
}

inline SweepResult mask_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"bound_mask"};
  for (int c = 0; c < cases; ++c) {
    const int bins = pick(rng, 1, 300);
    const Mat z = oracle::random_mat(rng, bins, 2, -4, 4);
    MaskFrame m(bins);
    bound_mask(to_eigen(z), m);
    Mat ref(bins, 2);
    for (int f = 0; f < bins; ++f) {
      const double mag = std::hypot(z(f, 0), z(f, 1));
      ref(f, 0) = mag > 0 ? z(f, 0) * std::tanh(mag) / mag : 0;
      ref(f, 1) = mag > 0 ? z(f, 1) * std::tanh(mag) / mag : 0;
    }
    FeatureMap got(bins, 2);
    for (int f = 0; f < bins; ++f) got(f, 0) = m[f].real(), got(f, 1) = m[f].imag();
    track(r, scaled_error(got, ref));
  }
  return r;
}

inline SweepResult fft_sweep(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  SweepResult r{"real_fft"};
  for (int c = 0; c < cases; ++c) {
    const int n = 1 << pick(rng, 2, 9);
    const auto x = oracle::uniform(rng, n);
    const auto ref = oracle::dft(x);
    RealFft<float> fft(n);
    std::vector<std::complex<float>> out(n / 2 + 1);
    fft.forward(to_float(x), out);
    double worst = 0;
    for (int k = 0; k <= n / 2; ++k)
      worst = std::max(worst, std::abs(std::complex<double>(out[k]) - ref[k]) / std::max(1.0, std::abs(ref[k])));
    track(r, worst);
  }
  return r;
}

inline std::vector<SweepResult> all_sweeps(std::uint64_t seed, int cases) {
  using Fn = SweepResult (*)(std::uint64_t, int);
  const Fn fns[] = {conv_sweep,   deconv_sweep,   linear_sweep,     gru_sweep,
                    mhsa_sweep,   batchnorm_sweep, layernorm_sweep, prelu_sweep,
                    dprnn_sweep,  dpt_sweep,       timeconv_sweep,  timedeconv_sweep,
                    mask_sweep,   fft_sweep};
  std::vector<SweepResult> out;
  std::uint64_t s = seed;
  for (Fn f : fns) out.push_back(f(s++, cases));
  return out;
}

}  // namespace sweeps
