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

#ifndef CODA_RECORD_H_
#define CODA_RECORD_H_

#include <optional>
#include <string>
#include <string_view>

#include "coda/constraints.h"
#include "coda/corpus.h"
#include "coda/validator.h"
#include "coda/verbalizer.h"

namespace coda {

enum class AcceptPolicy { kAll, kStrict, kRelaxed };

std::string_view AcceptPolicyName(AcceptPolicy policy);
AcceptPolicy ParseAcceptPolicy(std::string_view name);

// One generation slot of the run. Accepted records carry a payload;
// rejected ones carry a reason.
struct AugmentationRecord {
  std::string source_id;
  GenerationMode mode = GenerationMode::kNovel;
  size_t round = 0;
  size_t slot = 0;        // position among the round's slots
  size_t mode_index = 0;  // position among slots of the same mode
  ConstraintSet constraints;
  Instruction instruction;
  std::string generation;
  std::optional<Payload> payload;
  std::optional<FaithfulnessVerdict> verdict;
  bool accepted = false;
  std::string rejection_reason;

  // "<source_id>#<mode><mode_index>#r<round>".
  std::string AugmentedId() const;
};

// Policy "all" accepts any record with a payload; "strict" and "relaxed"
// additionally require the matching lexical and length verdicts.
bool Accept(const AugmentationRecord& record, AcceptPolicy policy);

}  // namespace coda

#endif  // CODA_RECORD_H_
