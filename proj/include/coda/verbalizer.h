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

#ifndef CODA_VERBALIZER_H_
#define CODA_VERBALIZER_H_

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coda/constraints.h"
#include "coda/corpus.h"

namespace coda {

enum class ClauseKind { kKeywords, kLabel, kEntities, kPos, kLength, kConcept };

std::string_view ClauseKindName(ClauseKind kind);
ClauseKind ParseClauseKind(std::string_view name);

struct LabelClause {
  std::string label;

  bool operator==(const LabelClause&) const = default;
};

struct ConceptClause {
  std::string concept_text;

  bool operator==(const ConceptClause&) const = default;
};

using ClausePayload =
    std::variant<LexicalConstraint, LabelClause, std::vector<EntityClause>,
                 PosSequence, LengthConstraint, ConceptClause>;

struct Clause {
  size_t number = 0;  // 1-based, consecutive
  ClauseKind kind = ClauseKind::kKeywords;
  ClausePayload payload;

  bool operator==(const Clause&) const = default;
};

struct Instruction {
  std::string source_id;
  GenerationMode mode = GenerationMode::kNovel;
  std::string text;
  std::vector<Clause> clauses;

  bool operator==(const Instruction&) const = default;
};

// Per-dataset label clause wording. A label found in `per_label` uses that
// sentence; otherwise `label_template` with "{label}" substituted.
// `entity_type_names` maps NER codes to words ("LOC" -> "location");
// unknown codes are lowercased.
struct LabelPhrasing {
  std::string label_template;
  std::map<std::string, std::string> per_label;
  std::map<std::string, std::string> entity_type_names;

  // "topic", "intent", "ots" or "conll". Throws kConfigError otherwise.
  static LabelPhrasing Preset(std::string_view name);
  std::string EntityTypeName(const std::string& code) const;
};

struct VerbalizerOptions {
  bool render_exemplars = true;
};

// Renders the fixed instruction templates. Throws kMissingPhrasing when a
// classification label has no phrasing.
Instruction Verbalize(const ConstraintSet& cs, TaskKind task,
                      const LabelPhrasing& phrasing,
                      const VerbalizerOptions& options = {});

}  // namespace coda

#endif  // CODA_VERBALIZER_H_
