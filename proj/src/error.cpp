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

#include "pels/error.hpp"

namespace pels {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUndefinedOpcode: return "undefined-opcode";
    case ErrorCode::kSyntax: return "syntax";
    case ErrorCode::kUnknownMnemonic: return "unknown-mnemonic";
    case ErrorCode::kArity: return "arity";
    case ErrorCode::kLiteralRange: return "literal-range";
    case ErrorCode::kDuplicateLabel: return "duplicate-label";
    case ErrorCode::kUndefinedLabel: return "undefined-label";
    case ErrorCode::kTargetOutOfRange: return "target-out-of-range";
    case ErrorCode::kNestedLoop: return "nested-loop";
    case ErrorCode::kOperandWidth: return "operand-width";
    case ErrorCode::kInvalidField: return "invalid-field";
    case ErrorCode::kCapacityExceeded: return "capacity-exceeded";
    case ErrorCode::kLinkBusy: return "link-busy";
    case ErrorCode::kGroupOutOfRange: return "group-out-of-range";
    case ErrorCode::kDecodeError: return "decode-error";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kMismatchedStimulus: return "mismatched-stimulus";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace pels
