// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/common.hpp"

namespace streamenh {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInputSize: return "input size";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kUnknownPreset: return "unknown preset";
    case ErrorCode::kUnknownVariant: return "unknown variant";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kBadDtype: return "bad dtype";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kAlreadyFused: return "already fused";
    case ErrorCode::kFusion: return "fusion";
    case ErrorCode::kStateMismatch: return "state mismatch";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace streamenh
