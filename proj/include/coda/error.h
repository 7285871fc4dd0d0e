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

#ifndef CODA_ERROR_H_
#define CODA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace coda {

enum class ErrorCode {
  kParseError,
  kTaskMismatch,
  kInsufficientData,
  kPayloadInvalid,
  kDuplicateId,
  kBackendUnavailable,
  kDimensionMismatch,
  kConceptParseError,
  kEmptyReply,
  kTimeoutExceeded,
  kMissingPhrasing,
  kGroupSizeMismatch,
  kScorerUnavailable,
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coda

#endif  // CODA_ERROR_H_
