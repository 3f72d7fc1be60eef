// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>

#include "streamenh/io/weights.hpp"
#include "streamenh/model/graph.hpp"

namespace streamenh {

/// Seeded random weights for `graph`. Values are uniform in [-a, a] with
/// a = 0.3, narrowed to sqrt(3 / fan_in) for weight matrices so activations
/// keep unit scale through deep stacks; residual-branch output projections
/// are further divided by sqrt(2 * n_blocks). Norm gains are 1 + u, running means
/// lie in [-0.1, 0.1] and running variances in [0.5, 1.5]. The same
/// (graph, seed) always gives the same bundle.
WeightBundle random_weights(const ModelGraph& graph, std::uint64_t seed);
WeightBundle random_weights(const ModelConfig& config, std::uint64_t seed);

}  // namespace streamenh
