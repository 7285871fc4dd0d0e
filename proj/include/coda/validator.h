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

#ifndef CODA_VALIDATOR_H_
#define CODA_VALIDATOR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coda/constraints.h"
#include "coda/pos_tagger.h"
#include "coda/verbalizer.h"
#include "json.hpp"

namespace coda {

struct LexicalVerdict {
  bool strict = false;
  bool relaxed = false;
  double fraction = 0.0;  // hit groups / groups, 1 when there are none
  size_t hits = 0;
  size_t groups = 0;
  bool exclusion_present = false;

  bool operator==(const LexicalVerdict&) const = default;
};

struct LengthVerdict {
  bool strict = false;
  bool relaxed = false;
  size_t word_count = 0;

  bool operator==(const LengthVerdict&) const = default;
};

inline constexpr double kRelaxedKeywordFraction = 0.75;

// A group is hit when any alternative occurs case-insensitively on token
// boundaries. Strict needs every group, relaxed 75% of them; any excluded
// keyword fails both.
LexicalVerdict CheckLexical(std::string_view generation,
                            const LexicalConstraint& constraint);

// Strict: lower <= words <= upper. Relaxed: floor(0.75 * lower) <= words
// <= ceil(1.25 * upper).
LengthVerdict CheckLength(std::string_view generation,
                          const LengthConstraint& constraint);

// Concepts whose phrase occurs in the generation, or all of whose content
// word stems do.
std::vector<std::string> ViolatedConcepts(std::string_view generation,
                                          const ConceptConstraint& constraint);
bool CheckConcept(std::string_view generation,
                  const ConceptConstraint& constraint);

size_t EditDistance(std::span<const Upos> a, std::span<const Upos> b);

// Best 1 - distance / max(len) over the generation's sentences; 0 for an
// empty generation.
double CheckSyntactic(std::string_view generation,
                      const SyntacticConstraint& constraint,
                      const PosTagger& tagger);

struct FaithfulnessVerdict {
  LexicalVerdict lexical;
  LengthVerdict length;
  std::optional<bool> concept_ok;
  std::vector<std::string> violated_concepts;
  std::optional<double> syntactic_similarity;  // report only

  bool operator==(const FaithfulnessVerdict&) const = default;
};

// Checks a generation against the constraint values recorded in the
// instruction's clause map.
FaithfulnessVerdict ValidateGeneration(std::string_view generation,
                                       const Instruction& instruction,
                                       const PosTagger& tagger);

struct FaithfulnessRow {
  std::string name;
  size_t records = 0;
  double lexical = 0.0;  // percentages
  double lexical_relaxed = 0.0;
  double length = 0.0;
  double length_relaxed = 0.0;
  std::optional<double> concept_pass;
  std::optional<double> syntactic_similarity;  // mean, in [0, 1]
};

struct FaithfulnessReport {
  std::vector<FaithfulnessRow> rows;
  FaithfulnessRow overall;

  nlohmann::json ToJson() const;
  // Task | Lexical | Lexical 75% | Length | Length 75%
  std::string ToTable() const;
};

struct NamedVerdicts {
  std::string name;
  std::vector<FaithfulnessVerdict> verdicts;
};

FaithfulnessRow SummarizeVerdicts(std::string name,
                                  std::span<const FaithfulnessVerdict> verdicts);
FaithfulnessReport BuildFaithfulnessReport(std::span<const NamedVerdicts> sets);

}  // namespace coda

#endif  // CODA_VALIDATOR_H_
