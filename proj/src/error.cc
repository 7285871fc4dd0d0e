//
// Copyright 2026 The coda-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "coda/error.h"

namespace coda {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kTaskMismatch: return "TaskMismatch";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kPayloadInvalid: return "PayloadInvalid";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kConceptParseError: return "ConceptParseError";
    case ErrorCode::kEmptyReply: return "EmptyReply";
    case ErrorCode::kTimeoutExceeded: return "TimeoutExceeded";
    case ErrorCode::kMissingPhrasing: return "MissingPhrasing";
    case ErrorCode::kGroupSizeMismatch: return "GroupSizeMismatch";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace coda
