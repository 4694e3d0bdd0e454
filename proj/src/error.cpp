// Copyright 2026 The Hankel Dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hankel/error.hpp"

namespace hankel {

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kUsage;
    case ErrorCode::kIngestion:
    case ErrorCode::kFormat:
    case ErrorCode::kInvalidRegion:
    case ErrorCode::kRegionTooSmall:
    case ErrorCode::kSequenceTooShort:
      return ErrorCategory::kIngestion;
    case ErrorCode::kProtocol:
    case ErrorCode::kEmptyGallery:
      return ErrorCategory::kProtocol;
    case ErrorCode::kDegenerateRect:
    case ErrorCode::kDegenerateWindow:
    case ErrorCode::kZeroDynamics:
    case ErrorCode::kIncompatibleChannels:
    case ErrorCode::kUndecidable:
    case ErrorCode::kUnstableSystem:
      return ErrorCategory::kComputation;
  }
  return ErrorCategory::kComputation;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateRect: return "degenerate-rect";
    case ErrorCode::kDegenerateWindow: return "degenerate-window";
    case ErrorCode::kRegionTooSmall: return "region-too-small";
    case ErrorCode::kInvalidRegion: return "invalid-region";
    case ErrorCode::kIngestion: return "ingestion";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kSequenceTooShort: return "sequence-too-short";
    case ErrorCode::kZeroDynamics: return "zero-dynamics";
    case ErrorCode::kIncompatibleChannels: return "incompatible-channels";
    case ErrorCode::kEmptyGallery: return "empty-gallery";
    case ErrorCode::kUndecidable: return "undecidable-input";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kUnstableSystem: return "unstable-system";
  }
  return "unknown";
}

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kUsage: return 1;
    case ErrorCategory::kIngestion: return 2;
    case ErrorCategory::kProtocol: return 3;
    case ErrorCategory::kComputation: return 4;
  }
  return 4;
}

}  // namespace hankel
