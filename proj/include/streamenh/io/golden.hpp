// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamenh/io/weights.hpp"

namespace streamenh {

/// Golden-case container: a directory holding manifest.json and one
/// weights-format tensor file per case.
///
///   {"version": 1,
///    "cases": [{"id": "conv_freq/0", "op": "conv_freq", "tolerance": 1e-5,
///               "file": "conv_freq_0.bin", "attrs": {"stride": 2, ...}}]}
///
/// Tensor names per op (layouts as in weight files):
///   conv_freq        x[F,Cin] weight[K,Cin,Cout] bias; attrs stride, padding
///   deconv_freq      x[F,Cin] weight[K,Cout,Cin] bias; attrs stride,
///                    padding, out_bins
///   timeconv3_step   x[T,F,Cin] weight[tk,K,Cin,Cout] bias; attrs stride,
///                    padding; expected[T,F',Cout] one frame per step
///   gru_step         x[P,I] h[P,H] w_ih[3H,I] w_hh b_ih b_hh
///   mhsa_freq        x[F,C] w_q b_q w_k b_k w_v b_v w_o b_o; attrs heads
///   dpt_time_step    x[T,P,C] plus the mhsa tensors; attrs heads, window
///   batchnorm_infer  x gamma beta running_mean running_var; attrs eps
///   layernorm        x gamma beta; attrs eps
///   dprnn_freq_step  x[P,I] fwd.{w_ih,w_hh,b_ih,b_hh} bwd.{...}
///                    proj.weight[C,2G] proj.bias
///   model            the case file is a weight bundle; attrs.data names a
///                    tensor file with spectra[T,bins,2] and expected[T,bins,2]
///                    (mask real, imag); attrs.fused replays after fusion
/// Every kernel case holds its reference output as "expected".
struct GoldenCase {
  std::string id;
  std::string op;
  double tolerance = 1e-5;
  std::string file;
  nlohmann::json attrs = nlohmann::json::object();
};

struct GoldenManifest {
  std::vector<GoldenCase> cases;
};

GoldenManifest load_manifest(const std::filesystem::path& dir);
void save_manifest(const GoldenManifest& manifest, const std::filesystem::path& dir);

struct GoldenResult {
  std::string id;
  std::string op;
  bool passed = false;
  double max_abs_error = 0;
  double tolerance = 0;
  /// First element beyond tolerance, when one exists.
  std::string divergence;
};

/// Runs the engine on one case. Malformed cases raise Error(kFormat).
GoldenResult replay_case(const GoldenCase& c, const std::filesystem::path& dir);
std::vector<GoldenResult> replay_all(const std::filesystem::path& dir);

/// Compares flattened values; fills max_abs_error, passed and divergence.
void compare_tensors(std::span<const float> expected, std::span<const float> actual,
                     const std::string& tensor, GoldenResult& result);

}  // namespace streamenh
