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

#ifndef CODA_CONSTRAINTS_H_
#define CODA_CONSTRAINTS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coda/corpus.h"
#include "coda/embedding.h"
#include "coda/mining.h"
#include "coda/pos_tagger.h"
#include "coda/rng.h"
#include "coda/textkit.h"

namespace coda {

// One required keyword; any alternative satisfies it.
struct KeywordGroup {
  std::vector<std::string> alternatives;
  bool mandatory = false;  // target span, not counted against k
  bool quoted = false;     // rendered inside double quotes

  bool operator==(const KeywordGroup&) const = default;
};

struct LexicalConstraint {
  std::vector<KeywordGroup> include;
  std::vector<std::string> exclude;

  bool operator==(const LexicalConstraint&) const = default;
};

struct SyntacticConstraint {
  PosSequence pos;
  size_t source_sentence_index = 0;

  bool operator==(const SyntacticConstraint&) const = default;
};

struct SemanticConstraint {
  std::string label;
  std::vector<std::string> exemplars;
  std::vector<std::string> exemplar_ids;
  uint64_t exemplar_order_seed = 0;

  bool operator==(const SemanticConstraint&) const = default;
};

struct LengthConstraint {
  size_t lower = 1;
  size_t upper = 1;

  bool operator==(const LengthConstraint&) const = default;
};

struct ConceptConstraint {
  std::vector<std::string> negated_concepts;

  bool operator==(const ConceptConstraint&) const = default;
};

struct EntityClause {
  std::string surface;
  std::string entity_type;  // label inventory code, e.g. "LOC"

  bool operator==(const EntityClause&) const = default;
};

enum class GenerationMode { kNovel, kRephrase };

std::string_view GenerationModeName(GenerationMode mode);
GenerationMode ParseGenerationMode(std::string_view name);

struct RephraseSource {
  std::string partner_id;
  std::string description;

  bool operator==(const RephraseSource&) const = default;
};

struct ConstraintSet {
  std::string source_id;
  GenerationMode mode = GenerationMode::kNovel;
  size_t slot = 0;   // position among the slots of one round
  size_t round = 0;
  std::optional<RephraseSource> rephrase;  // present iff mode is kRephrase
  LexicalConstraint lexical;
  std::optional<SyntacticConstraint> syntactic;
  std::optional<SemanticConstraint> semantic;
  LengthConstraint length;
  std::optional<ConceptConstraint> concept_negation;
  std::vector<EntityClause> entity_clauses;
  std::optional<std::string> answer_clause;

  bool operator==(const ConstraintSet&) const = default;
};

// max(3, ceil(0.15 * word_count)).
size_t DefaultKeywordCount(size_t word_count);

struct ScoredNGram {
  NGram gram;
  double score = 0.0;
};

// Cosine of every n-gram's embedding against the whole text's embedding.
std::vector<ScoredNGram> ScoreNGrams(const TokenSequence& seq,
                                     const EmbeddingBackend& embedder);

// Greedy pick by descending score (ties: earlier start, then shorter),
// skipping n-grams that touch an occupied or already chosen token position
// or repeat an already chosen surface case-insensitively. Returns indices
// into `scored`.
std::vector<size_t> SelectKeywords(std::span<const ScoredNGram> scored,
                                   size_t k, std::vector<bool> occupied);

// Keywords by embedding salience. NER documents get their entity
// surfaces prepended and QA documents the answer-bearing sentence appended,
// both as mandatory groups whose tokens are off limits for keywords.
LexicalConstraint ExtractLexical(const Document& doc, TaskKind task, size_t k,
                                 const EmbeddingBackend& embedder);

SyntacticConstraint ExtractSyntactic(const Document& doc, Rng& rng,
                                     const PosTagger& tagger);

// Up to three distinct same-label exemplars (never the document itself nor
// a copy of its text) in seeded random order.
SemanticConstraint ExtractSemantic(const Document& doc, const Dataset& dataset,
                                   Rng& rng);

// [max(1, round(L - sd)), round(L + sd)], rounding half away from zero.
LengthConstraint ExtractLength(size_t word_count, const LengthStats& stats);
LengthConstraint ExtractLength(const Document& doc, const LengthStats& stats);

ConceptConstraint ExtractConcept(const std::string& label,
                                 const ConceptTable& table);

// Distinct entity (surface, type) pairs in order of first mention.
std::vector<EntityClause> EntityClauses(const Document& doc);

// Sentence holding the gold answer.
std::string AnswerSentence(const Document& doc);

// Nearest same-POS dataset word by embedding cosine, for "A or B" keyword
// alternatives.
class SynonymIndex {
 public:
  SynonymIndex(const Dataset& dataset, const EmbeddingBackend& embedder,
               const PosTagger& tagger);

  std::optional<std::string> Nearest(const std::string& word) const;

 private:
  struct Entry {
    std::string word;
    Upos tag;
    EmbeddingVector vector;
  };
  const EmbeddingBackend& embedder_;
  const PosTagger& tagger_;
  std::vector<Entry> vocabulary_;
};

struct ExtractionOptions {
  size_t k_keywords = 0;  // 0 selects DefaultKeywordCount
  bool enable_syntactic = false;
  bool enable_concept = true;
  bool enable_synonyms = false;
  bool enable_exclusions = false;
};

// Shared read-only inputs for building constraint sets over one dataset.
struct ExtractionContext {
  const Dataset& dataset;
  const EmbeddingBackend& embedder;
  const PosTagger& tagger;
  LengthStats length_stats;
  const ConceptTable* concepts = nullptr;
  std::span<const PhraseLabelScore> spurious;
  const SynonymIndex* synonyms = nullptr;
  ExtractionOptions options;
};

struct SlotSpec {
  GenerationMode mode = GenerationMode::kNovel;
  size_t slot = 0;
  size_t round = 0;
  std::optional<RephraseSource> rephrase;
};

// Seed of the stream for one (document, slot, round).
uint64_t SlotSeed(uint64_t run_seed, const std::string& doc_id, size_t slot,
                  size_t round);

// Lexical part of a document's constraint set, including the optional
// synonym and exclusion passes. Identical for every slot of a document.
LexicalConstraint BuildLexical(const Document& doc,
                               const ExtractionContext& ctx);

// Assembles the per-task constraint set. `lexical` may be passed in to
// reuse BuildLexical across slots.
ConstraintSet BuildConstraintSet(
    const Document& doc, const SlotSpec& slot, const ExtractionContext& ctx,
    uint64_t run_seed,
    const std::optional<LexicalConstraint>& lexical = std::nullopt);

}  // namespace coda

#endif  // CODA_CONSTRAINTS_H_
