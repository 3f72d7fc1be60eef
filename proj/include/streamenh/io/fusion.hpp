// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "streamenh/io/weights.hpp"
#include "streamenh/model/graph.hpp"

namespace streamenh {

/// Folds every batch norm of `graph` into a neighbouring affine layer.
///
/// A norm that feeds a GRU, attention or bidirectional GRU is folded
/// forward into that layer's input projections. Otherwise it is folded
/// backward into a directly preceding conv, deconv or linear layer. Any
/// other neighbour (a residual add, an activation, ...) is an
/// Error(kFusion) naming the norm. A bundle already marked fused raises
/// Error(kAlreadyFused).
///
/// The result has no batch-norm tensors and is marked fused.
WeightBundle fuse_batchnorm(const WeightBundle& bundle, const ModelGraph& graph);

/// Uses the bundle's embedded config.
WeightBundle fuse_batchnorm(const WeightBundle& bundle);

}  // namespace streamenh
