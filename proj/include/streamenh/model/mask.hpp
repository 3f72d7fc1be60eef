// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "streamenh/common.hpp"

namespace streamenh {

/// Complex ratio mask, one complex gain per STFT bin.
using MaskFrame = Eigen::VectorXcf;

/// Maps [bins x 2] (real, imag) head logits to a complex mask of magnitude
/// tanh(|logit|) <= 1, keeping the logit's phase.
void bound_mask(const FeatureMap& logits, MaskFrame& mask);

/// out = spectrum * mask per bin. `out` may alias `spectrum`.
void apply_mask(const ComplexSpectrum& spectrum, const MaskFrame& mask,
                ComplexSpectrum& out);
ComplexSpectrum apply_mask(const ComplexSpectrum& spectrum, const MaskFrame& mask);

}  // namespace streamenh
