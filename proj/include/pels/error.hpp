// Copyright 2026 The PELS Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PELS_ERROR_HPP_
#define PELS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pels {

// Stable codes carried by every exception the library throws. Tests and the
// CLI match on these rather than on message text.
enum class ErrorCode {
  kUndefinedOpcode,
  kSyntax,
  kUnknownMnemonic,
  kArity,
  kLiteralRange,
  kDuplicateLabel,
  kUndefinedLabel,
  kTargetOutOfRange,
  kNestedLoop,
  kOperandWidth,
  kInvalidField,
  kCapacityExceeded,
  kLinkBusy,
  kGroupOutOfRange,
  kDecodeError,
  kConfig,
  kMismatchedStimulus,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pels

#endif  // PELS_ERROR_HPP_
