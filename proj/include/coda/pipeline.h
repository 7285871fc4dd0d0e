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

#ifndef CODA_PIPELINE_H_
#define CODA_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coda/backend.h"
#include "coda/constraints.h"
#include "coda/corpus.h"
#include "coda/embedding.h"
#include "coda/metrics.h"
#include "coda/mining.h"
#include "coda/pos_tagger.h"
#include "coda/record.h"
#include "coda/validator.h"
#include "coda/verbalizer.h"
#include "json.hpp"

namespace coda {

// Run configuration. The JSON form uses exactly these field names; unknown
// keys are rejected.
struct RunConfig {
  TaskKind task = TaskKind::kClassification;
  std::string dataset_path;
  std::optional<CorpusFormat> format;  // default follows the task
  std::string dataset_name = "dataset";
  std::string output_dir = "coda-out";
  uint64_t seed = 0;
  size_t rounds = 1;
  size_t novel_slots = 3;
  size_t rephrase_slots = 2;
  size_t k_keywords = 0;  // 0 selects the length-based default
  size_t retrieval_k = 5;
  bool enable_syntactic = false;
  bool enable_concept = true;
  bool enable_synonyms = false;
  bool enable_exclusions = false;
  SamplingParams sampling;
  bool default_max_tokens = true;  // max_tokens from the length bound
  std::string backend_url = "mock";
  std::string embed_url;   // empty: built-in hashed embedder
  std::string tagger_url;  // empty: built-in rule tagger
  std::string scorer_url;  // empty: built-in trigram scorer
  size_t concurrency = 4;
  AcceptPolicy accept_policy = AcceptPolicy::kAll;
  size_t min_support = 5;
  size_t top_n = 10;
  nlohmann::json label_phrasing = "topic";  // preset name or object
  bool render_exemplars = true;
  int retries = 2;
  int timeout_ms = 60000;

  static RunConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  // Throws kConfigError on inconsistent values.
  void Validate() const;
  CorpusFormat corpus_format() const;
  LabelPhrasing phrasing() const;
  HttpOptions http_options() const;
  ExtractionOptions extraction_options() const;
};

// Reads a config file; CODA_BACKEND_URL, when set, overrides backend_url.
RunConfig LoadRunConfig(const std::filesystem::path& path);
void ApplyEnvironment(RunConfig& config);

// Model-backed collaborators selected by the config's URLs.
struct Services {
  std::unique_ptr<EmbeddingBackend> embedder;
  std::unique_ptr<PosTagger> tagger;
  std::unique_ptr<GenerationBackend> generator;
  std::unique_ptr<RecordingBackend> recorder;  // wraps `generator`
};

// The built-in embedder is fit on `dataset`.
Services MakeServices(const RunConfig& config, const Dataset& dataset);

// NER: case-insensitive token-boundary search for every clause surface;
// overlaps go to the longest match, then the leftmost, then clause order.
// Returns nullopt when nothing matches.
std::optional<NerPayload> RelabelNer(std::string_view generation,
                                     std::span<const EntityClause> clauses);

// QA: first case-sensitive occurrence of the answer; nullopt if absent.
std::optional<QaPayload> RelabelQa(std::string_view generation,
                                   const QaPayload& gold);

inline constexpr char kRejectNoEntity[] = "no_entity";
inline constexpr char kRejectAnswerMissing[] = "answer_missing";
inline constexpr char kRejectGenerationFailed[] = "generation_failed";
inline constexpr char kRejectPolicy[] = "policy";

// Stage entry points, also used by the CLI subcommands.
AnalysisArtifact RunAnalysis(const Dataset& dataset, const RunConfig& config,
                             GenerationBackend& backend);

// Constraint sets for every document, round and slot in canonical order:
// documents in dataset order, then rounds, then novel before rephrase slots.
std::vector<ConstraintSet> RunExtraction(const Dataset& dataset,
                                         const RunConfig& config,
                                         const AnalysisArtifact& analysis,
                                         Services& services);

std::vector<Instruction> RunVerbalization(std::span<const ConstraintSet> sets,
                                          const RunConfig& config);

// Generates, relabels, validates and applies the accept policy. The
// result is in the order of `sets`; failures become rejected records.
std::vector<AugmentationRecord> RunGeneration(
    const Dataset& dataset, std::span<const ConstraintSet> sets,
    std::span<const Instruction> instructions, const RunConfig& config,
    Services& services);

// Relabel, validate and accept for already generated text.
void FinishRecord(AugmentationRecord& record, const Dataset& dataset,
                  const RunConfig& config, const PosTagger& tagger);

FaithfulnessReport RunFaithfulness(std::span<const AugmentationRecord> records,
                                   const RunConfig& config);

// Perplexity over accepted augmentations; diversity over sources whose
// every slot was accepted.
QualityReport RunQuality(const Dataset& dataset,
                         std::span<const AugmentationRecord> records,
                         const RunConfig& config);

struct RunResult {
  Dataset augmented;
  std::vector<AugmentationRecord> records;
  FaithfulnessReport faithfulness;
  QualityReport quality;
};

// End-to-end run writing every artifact under config.output_dir.
RunResult RunAugmentation(const RunConfig& config);

// Artifact writers shared by the CLI stages.
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonLines(const std::filesystem::path& path,
                    std::span<const nlohmann::json> lines);
std::vector<nlohmann::json> ReadJsonLines(const std::filesystem::path& path);

void WriteRunArtifacts(const std::filesystem::path& dir, const RunConfig& config,
                       const Dataset& augmented,
                       std::span<const AugmentationRecord> records,
                       const FaithfulnessReport& faithfulness,
                       const QualityReport& quality);

}  // namespace coda

#endif  // CODA_PIPELINE_H_
