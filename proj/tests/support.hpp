// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "oracles/naive.hpp"
#include "streamenh/common.hpp"

namespace testing {

using streamenh::FeatureMap;

inline FeatureMap to_eigen(const oracle::Mat& m) {
  FeatureMap out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = float(m(i, j));
  return out;
}

inline oracle::Mat to_oracle(const FeatureMap& m) {
  oracle::Mat out(int(m.rows()), int(m.cols()));
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out(i, j) = m(i, j);
  return out;
}

inline std::vector<float> to_float(const std::vector<double>& v) { return {v.begin(), v.end()}; }

/// Largest |a - b| / max(1, |b|); the kernel-oracle metric.
inline double scaled_error(std::span<const float> actual, std::span<const double> expected) {
  if (actual.size() != expected.size()) return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = std::abs(actual[i] - expected[i]) / std::max(1.0, std::abs(expected[i]));
    if (!(e <= worst)) worst = e;
  }
  return worst;
}

inline double scaled_error(const FeatureMap& actual, const oracle::Mat& expected) {
  if (actual.rows() != expected.rows || actual.cols() != expected.cols) return INFINITY;
  return scaled_error(std::span<const float>(actual.data(), actual.size()), expected.v);
}

inline double max_abs_diff(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, double(std::abs(a[i] - b[i])));
  return m;
}

inline std::vector<float> noise(std::size_t n, std::uint64_t seed, float amplitude = 0.5f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-amplitude, amplitude);
  std::vector<float> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace testing
