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

#ifndef CODA_SERIALIZATION_H_
#define CODA_SERIALIZATION_H_

// JSON mappings for the artifact types. Optional fields are written as
// null and read back as absent.

#include "coda/constraints.h"
#include "coda/corpus.h"
#include "coda/record.h"
#include "coda/validator.h"
#include "coda/verbalizer.h"
#include "json.hpp"

namespace coda {

void to_json(nlohmann::json& j, const EntitySpan& v);
void from_json(const nlohmann::json& j, EntitySpan& v);

// Payloads carry a "type" tag: "label", "ner" or "qa". QA offsets are bytes.
nlohmann::json PayloadToJson(const Payload& payload);
Payload PayloadFromJson(const nlohmann::json& j);

void to_json(nlohmann::json& j, const KeywordGroup& v);
void from_json(const nlohmann::json& j, KeywordGroup& v);
void to_json(nlohmann::json& j, const LexicalConstraint& v);
void from_json(const nlohmann::json& j, LexicalConstraint& v);
void to_json(nlohmann::json& j, const SyntacticConstraint& v);
void from_json(const nlohmann::json& j, SyntacticConstraint& v);
void to_json(nlohmann::json& j, const SemanticConstraint& v);
void from_json(const nlohmann::json& j, SemanticConstraint& v);
void to_json(nlohmann::json& j, const LengthConstraint& v);
void from_json(const nlohmann::json& j, LengthConstraint& v);
void to_json(nlohmann::json& j, const ConceptConstraint& v);
void from_json(const nlohmann::json& j, ConceptConstraint& v);
void to_json(nlohmann::json& j, const EntityClause& v);
void from_json(const nlohmann::json& j, EntityClause& v);
void to_json(nlohmann::json& j, const RephraseSource& v);
void from_json(const nlohmann::json& j, RephraseSource& v);
void to_json(nlohmann::json& j, const ConstraintSet& v);
void from_json(const nlohmann::json& j, ConstraintSet& v);

void to_json(nlohmann::json& j, const Clause& v);
void from_json(const nlohmann::json& j, Clause& v);
void to_json(nlohmann::json& j, const Instruction& v);
void from_json(const nlohmann::json& j, Instruction& v);

void to_json(nlohmann::json& j, const LexicalVerdict& v);
void from_json(const nlohmann::json& j, LexicalVerdict& v);
void to_json(nlohmann::json& j, const LengthVerdict& v);
void from_json(const nlohmann::json& j, LengthVerdict& v);
void to_json(nlohmann::json& j, const FaithfulnessVerdict& v);
void from_json(const nlohmann::json& j, FaithfulnessVerdict& v);

void to_json(nlohmann::json& j, const AugmentationRecord& v);
void from_json(const nlohmann::json& j, AugmentationRecord& v);

}  // namespace coda

#endif  // CODA_SERIALIZATION_H_
