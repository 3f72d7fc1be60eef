// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/model/mask.hpp"

#include <cmath>

namespace streamenh {

void bound_mask(const FeatureMap& logits, MaskFrame& mask) {
  if (logits.cols() != 2) throw Error(ErrorCode::kShape, "mask logits need 2 channels");
  if (mask.size() != logits.rows()) mask.resize(logits.rows());
  for (Eigen::Index f = 0; f < logits.rows(); ++f) {
    const float re = logits(f, 0);
    const float im = logits(f, 1);
    const float mag = std::hypot(re, im);
    // tanh(m) / m -> 1 as m -> 0
    const float gain = mag > 1e-12f ? std::tanh(mag) / mag : 1.0f;
    mask[f] = std::complex<float>(re * gain, im * gain);
  }
}

void apply_mask(const ComplexSpectrum& spectrum, const MaskFrame& mask,
                ComplexSpectrum& out) {
  if (spectrum.size() != mask.size())
    throw Error(ErrorCode::kShape, "mask and spectrum bin counts differ");
  if (out.size() != spectrum.size()) out.resize(spectrum.size());
  out = spectrum.cwiseProduct(mask);
}

ComplexSpectrum apply_mask(const ComplexSpectrum& spectrum, const MaskFrame& mask) {
  ComplexSpectrum out(spectrum.size());
  apply_mask(spectrum, mask, out);
  return out;
}

}  // namespace streamenh
