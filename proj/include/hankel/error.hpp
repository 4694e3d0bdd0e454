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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hankel {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateRect,
  kDegenerateWindow,
  kRegionTooSmall,
  kInvalidRegion,
  kIngestion,
  kFormat,
  kSequenceTooShort,
  kZeroDynamics,
  kIncompatibleChannels,
  kEmptyGallery,
  kUndecidable,
  kProtocol,
  kUnstableSystem,
};

/// Coarse failure class; each maps to a distinct process exit code.
enum class ErrorCategory { kUsage, kIngestion, kProtocol, kComputation };

ErrorCategory category_of(ErrorCode code);
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

int exit_code_for(ErrorCategory category);

}  // namespace hankel
