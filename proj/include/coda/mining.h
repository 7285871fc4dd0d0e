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

#ifndef CODA_MINING_H_
#define CODA_MINING_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coda/backend.h"
#include "coda/corpus.h"
#include "coda/embedding.h"
#include "coda/rng.h"
#include "coda/textkit.h"
#include "json.hpp"

namespace coda {

struct PhraseLabelScore {
  std::string phrase;  // case-folded n-gram
  std::string label;
  double score = 0.0;
  size_t support = 0;  // documents of `label` containing the phrase
};

// Label-associated phrases: score = PMI(phrase, label) * log(1 + support)
// over document-level counts. Only positively associated phrases with
// support >= min_support are kept; each label contributes its top_n by
// score, ties broken by phrase. Labels are emitted in inventory order.
// Non-classification datasets yield an empty list.
std::vector<PhraseLabelScore> SpuriousPhrases(const Dataset& dataset,
                                              size_t min_support = 5,
                                              size_t top_n = 10);

inline constexpr size_t kMaxConceptsPerLabel = 3;
inline constexpr size_t kMaxConceptWords = 8;
inline constexpr size_t kConceptExamples = 3;

struct ConceptTable {
  std::map<std::string, std::vector<std::string>> by_label;

  // Empty when the label has no entry.
  std::span<const std::string> For(const std::string& label) const;
};

std::string ConceptPrompt(const std::string& label,
                          std::span<const std::string> phrases,
                          std::span<const std::string> examples);

// First non-empty line, unquoted, truncated to kMaxConceptWords words.
// Throws kConceptParseError when nothing usable remains.
std::string ParseConceptReply(std::string_view reply);

// Up to kConceptExamples sentences of `label` documents containing the
// phrase on token boundaries, in dataset order.
std::vector<std::string> ExampleSentences(const Dataset& dataset,
                                          const std::string& label,
                                          const std::string& phrase);

// Prompts the backend per phrase (in score order) until three distinct
// concepts are collected for each label. Unparseable replies are logged
// and skipped.
ConceptTable AbstractConcepts(std::span<const PhraseLabelScore> phrases,
                              const Dataset& dataset,
                              GenerationBackend& backend,
                              const SamplingParams& params);

// Exact cosine index over one embedding per document.
class SimilarityIndex {
 public:
  SimilarityIndex(const Dataset& dataset, const EmbeddingBackend& embedder);

  size_t size() const { return ids_.size(); }
  const std::string& id(size_t i) const { return ids_[i]; }
  double Similarity(size_t a, size_t b) const;
  // Every other document, most similar first; ties by index.
  std::vector<size_t> Neighbors(size_t query) const;

 private:
  std::vector<std::string> ids_;
  std::vector<EmbeddingVector> vectors_;
};

// Uniform draw from the k most and k least similar other documents.
// Requires size() >= 2k + 1, else kInsufficientData.
size_t SamplePartner(const SimilarityIndex& index, size_t query, size_t k,
                     Rng& rng);

// The 2k candidate pool SamplePartner draws from.
std::vector<size_t> PartnerPool(const SimilarityIndex& index, size_t query,
                                size_t k);

std::string SummaryPrompt(std::string_view text);

// One-line description of the document, used verbatim in rephrase
// instructions. Throws kEmptyReply on a blank reply.
std::string AbstractDescription(const Document& doc,
                                GenerationBackend& backend,
                                const SamplingParams& params);

// Contents of analysis.json.
struct AnalysisArtifact {
  ConceptTable concepts;
  std::vector<PhraseLabelScore> spurious;
  LengthStats length_stats;
};

nlohmann::json AnalysisToJson(const AnalysisArtifact& artifact);
AnalysisArtifact AnalysisFromJson(const nlohmann::json& j);

}  // namespace coda

#endif  // CODA_MINING_H_
