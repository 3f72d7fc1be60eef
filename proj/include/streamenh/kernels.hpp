// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "streamenh/kernels/activation.hpp"
#include "streamenh/kernels/attention.hpp"
#include "streamenh/kernels/conv.hpp"
#include "streamenh/kernels/gru.hpp"
#include "streamenh/kernels/linear.hpp"
#include "streamenh/kernels/norm.hpp"
