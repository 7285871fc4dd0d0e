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

#include "coda/record.h"

#include "coda/error.h"

namespace coda {

std::string_view AcceptPolicyName(AcceptPolicy policy) {
  switch (policy) {
    case AcceptPolicy::kAll: return "all";
    case AcceptPolicy::kStrict: return "strict";
    case AcceptPolicy::kRelaxed: return "relaxed";
  }
  return "all";
}

AcceptPolicy ParseAcceptPolicy(std::string_view name) {
  if (name == "all") return AcceptPolicy::kAll;
  if (name == "strict") return AcceptPolicy::kStrict;
  if (name == "relaxed") return AcceptPolicy::kRelaxed;
  throw Error(ErrorCode::kConfigError,
              "unknown accept policy '" + std::string(name) + "'");
}

std::string AugmentationRecord::AugmentedId() const {
  return source_id + "#" + std::string(GenerationModeName(mode)) +
         std::to_string(mode_index) + "#r" + std::to_string(round);
}

bool Accept(const AugmentationRecord& record, AcceptPolicy policy) {
  if (!record.payload) return false;
  switch (policy) {
    case AcceptPolicy::kAll:
      return true;
    case AcceptPolicy::kStrict:
      return record.verdict && record.verdict->lexical.strict &&
             record.verdict->length.strict;
    case AcceptPolicy::kRelaxed:
      return record.verdict && record.verdict->lexical.relaxed &&
             record.verdict->length.relaxed;
  }
  return false;
}

}  // namespace coda
