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

#include "coda/pipeline.h"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "coda/error.h"
#include "coda/rng.h"
#include "coda/serialization.h"
#include "coda/textkit.h"

namespace coda {
namespace {

using nlohmann::json;

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> keys = {
      "task",           "dataset_path",     "format",
      "dataset_name",   "output_dir",       "seed",
      "rounds",         "novel_slots",      "rephrase_slots",
      "k_keywords",     "retrieval_k",      "enable_syntactic",
      "enable_concept", "enable_synonyms",  "enable_exclusions",
      "sampling",       "backend_url",      "embed_url",
      "tagger_url",     "scorer_url",       "concurrency",
      "accept_policy",  "min_support",      "top_n",
      "label_phrasing", "render_exemplars", "retries",
      "timeout_ms"};
  return keys;
}

std::string Padded(size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. fn must not throw.
template <typename Fn>
void ParallelFor(size_t n, size_t workers, Fn&& fn) {
  workers = std::max<size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

// Possessive clitics split off so "Arafat's" still matches "Arafat".
std::vector<std::string> RelabelTokens(std::string_view generation) {
  std::vector<std::string> out;
  for (const Token& t : Tokenize(generation).tokens) {
    const std::string& s = t.surface;
    bool split = false;
    for (std::string_view clitic : {"'s", "\xE2\x80\x99s"}) {
      if (s.size() > clitic.size() &&
          std::string_view(s).substr(s.size() - clitic.size()) == clitic) {
        out.push_back(s.substr(0, s.size() - clitic.size()));
        out.emplace_back(clitic);
        split = true;
        break;
      }
    }
    if (!split) out.push_back(s);
  }
  return out;
}

SamplingParams WithSeed(SamplingParams params, uint64_t seed) {
  params.seed = seed;
  return params;
}

size_t SlotsPerRound(const RunConfig& config) {
  return config.novel_slots + config.rephrase_slots;
}

const Document& SourceDocument(const Dataset& dataset, const std::string& id) {
  const std::optional<size_t> index = dataset.Find(id);
  if (!index) {
    throw Error(ErrorCode::kConfigError,
                "record source '" + id + "' is not in the dataset");
  }
  return dataset[*index];
}

std::string DatasetExtension(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kJsonl: return "jsonl";
    case CorpusFormat::kConll: return "conll";
    case CorpusFormat::kSquad: return "json";
  }
  return "jsonl";
}

json RejectionJson(const AugmentationRecord& r) {
  return {{"id", r.AugmentedId()},
          {"source_id", r.source_id},
          {"mode", GenerationModeName(r.mode)},
          {"round", r.round},
          {"slot", r.slot},
          {"reason", r.rejection_reason},
          {"generation", r.generation}};
}

}  // namespace

RunConfig RunConfig::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config must be an object");
  for (const auto& item : j.items()) {
    if (!ConfigKeys().count(item.key())) {
      throw Error(ErrorCode::kConfigError, "unknown config key '" + item.key() + "'");
    }
  }
  RunConfig c;
  try {
    if (j.contains("task")) c.task = ParseTaskKind(j.at("task").get<std::string>());
    c.dataset_path = j.value("dataset_path", c.dataset_path);
    if (j.contains("format") && !j.at("format").is_null()) {
      c.format = ParseCorpusFormat(j.at("format").get<std::string>());
    }
    c.dataset_name = j.value("dataset_name", c.dataset_name);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);
    c.rounds = j.value("rounds", c.rounds);
    c.novel_slots = j.value("novel_slots", c.novel_slots);
    c.rephrase_slots = j.value("rephrase_slots", c.rephrase_slots);
    c.k_keywords = j.value("k_keywords", c.k_keywords);
    c.retrieval_k = j.value("retrieval_k", c.retrieval_k);
    c.enable_syntactic = j.value("enable_syntactic", c.enable_syntactic);
    c.enable_concept = j.value("enable_concept", c.enable_concept);
    c.enable_synonyms = j.value("enable_synonyms", c.enable_synonyms);
    c.enable_exclusions = j.value("enable_exclusions", c.enable_exclusions);
    if (j.contains("sampling")) {
      const json& s = j.at("sampling");
      for (const auto& item : s.items()) {
        if (item.key() != "temperature" && item.key() != "top_p" &&
            item.key() != "top_k" && item.key() != "max_tokens") {
          throw Error(ErrorCode::kConfigError,
                      "unknown sampling key '" + item.key() + "'");
        }
      }
      c.sampling.temperature = s.value("temperature", c.sampling.temperature);
      c.sampling.top_p = s.value("top_p", c.sampling.top_p);
      c.sampling.top_k = s.value("top_k", c.sampling.top_k);
      if (s.contains("max_tokens") && !s.at("max_tokens").is_null()) {
        c.sampling.max_tokens = s.at("max_tokens").get<int>();
        c.default_max_tokens = false;
      }
    }
    c.backend_url = j.value("backend_url", c.backend_url);
    c.embed_url = j.value("embed_url", c.embed_url);
    c.tagger_url = j.value("tagger_url", c.tagger_url);
    c.scorer_url = j.value("scorer_url", c.scorer_url);
    c.concurrency = j.value("concurrency", c.concurrency);
    if (j.contains("accept_policy")) {
      c.accept_policy = ParseAcceptPolicy(j.at("accept_policy").get<std::string>());
    }
    c.min_support = j.value("min_support", c.min_support);
    c.top_n = j.value("top_n", c.top_n);
    if (j.contains("label_phrasing")) c.label_phrasing = j.at("label_phrasing");
    c.render_exemplars = j.value("render_exemplars", c.render_exemplars);
    c.retries = j.value("retries", c.retries);
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, e.what());
  }
  c.Validate();
  return c;
}

json RunConfig::ToJson() const {
  json sampling_json = {{"temperature", sampling.temperature},
                        {"top_p", sampling.top_p},
                        {"top_k", sampling.top_k},
                        {"max_tokens", default_max_tokens
                                           ? json(nullptr)
                                           : json(sampling.max_tokens)}};
  return {{"task", TaskKindName(task)},
          {"dataset_path", dataset_path},
          {"format", format ? json(CorpusFormatName(*format)) : json(nullptr)},
          {"dataset_name", dataset_name},
          {"output_dir", output_dir},
          {"seed", seed},
          {"rounds", rounds},
          {"novel_slots", novel_slots},
          {"rephrase_slots", rephrase_slots},
          {"k_keywords", k_keywords},
          {"retrieval_k", retrieval_k},
          {"enable_syntactic", enable_syntactic},
          {"enable_concept", enable_concept},
          {"enable_synonyms", enable_synonyms},
          {"enable_exclusions", enable_exclusions},
          {"sampling", sampling_json},
          {"backend_url", backend_url},
          {"embed_url", embed_url},
          {"tagger_url", tagger_url},
          {"scorer_url", scorer_url},
          {"concurrency", concurrency},
          {"accept_policy", AcceptPolicyName(accept_policy)},
          {"min_support", min_support},
          {"top_n", top_n},
          {"label_phrasing", label_phrasing},
          {"render_exemplars", render_exemplars},
          {"retries", retries},
          {"timeout_ms", timeout_ms}};
}

void RunConfig::Validate() const {
  const auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kConfigError, msg);
  };
  if (rounds == 0) fail("rounds must be at least 1");
  if (novel_slots + rephrase_slots == 0) fail("at least one slot per round is required");
  if (rephrase_slots > 0 && retrieval_k == 0) fail("retrieval_k must be positive");
  if (concurrency == 0) fail("concurrency must be at least 1");
  if (retries < 0) fail("retries must be non-negative");
  if (timeout_ms <= 0) fail("timeout_ms must be positive");
  if (min_support == 0) fail("min_support must be at least 1");
  sampling.Validate();
  phrasing();
}

CorpusFormat RunConfig::corpus_format() const {
  return format.value_or(DefaultFormat(task));
}

LabelPhrasing RunConfig::phrasing() const {
  if (label_phrasing.is_null()) {
    return LabelPhrasing::Preset(task == TaskKind::kNer ? "conll" : "topic");
  }
  if (label_phrasing.is_string()) {
    return LabelPhrasing::Preset(label_phrasing.get<std::string>());
  }
  if (!label_phrasing.is_object()) {
    throw Error(ErrorCode::kConfigError,
                "label_phrasing must be a preset name or an object");
  }
  try {
    LabelPhrasing p = LabelPhrasing::Preset(
        label_phrasing.value("preset", std::string("conll")));
    if (label_phrasing.contains("template")) {
      label_phrasing.at("template").get_to(p.label_template);
    }
    if (label_phrasing.contains("per_label")) {
      for (const auto& [k, v] : label_phrasing.at("per_label").items()) {
        p.per_label[k] = v.get<std::string>();
      }
    }
    if (label_phrasing.contains("entity_types")) {
      for (const auto& [k, v] : label_phrasing.at("entity_types").items()) {
        p.entity_type_names[k] = v.get<std::string>();
      }
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("label_phrasing: ") + e.what());
  }
}

HttpOptions RunConfig::http_options() const {
  HttpOptions options;
  options.timeout = std::chrono::milliseconds(timeout_ms);
  if (const char* key = std::getenv("CODA_API_KEY")) options.bearer_token = key;
  return options;
}

ExtractionOptions RunConfig::extraction_options() const {
  ExtractionOptions o;
  o.k_keywords = k_keywords;
  o.enable_syntactic = enable_syntactic;
  o.enable_concept = enable_concept;
  o.enable_synonyms = enable_synonyms;
  o.enable_exclusions = enable_exclusions;
  return o;
}

void ApplyEnvironment(RunConfig& config) {
  if (const char* url = std::getenv("CODA_BACKEND_URL"); url && *url) {
    config.backend_url = url;
  }
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  RunConfig config = RunConfig::FromJson(ReadJsonFile(path));
  ApplyEnvironment(config);
  return config;
}

Services MakeServices(const RunConfig& config, const Dataset& dataset) {
  Services s;
  const HttpOptions http = config.http_options();
  if (config.embed_url.empty()) {
    std::vector<std::string> texts;
    for (const Document& d : dataset.documents()) texts.push_back(d.text);
    s.embedder = std::make_unique<HashedTfidfEmbedder>(texts);
  } else {
    s.embedder = std::make_unique<HttpEmbeddingBackend>(config.embed_url, http);
  }
  if (config.tagger_url.empty()) {
    s.tagger = std::make_unique<RuleBasedPosTagger>();
  } else {
    s.tagger = std::make_unique<HttpPosTagger>(config.tagger_url, http);
  }
  RetryPolicy retry;
  retry.max_retries = config.retries;
  s.generator = MakeGenerationBackend(config.backend_url, retry, http);
  s.recorder = std::make_unique<RecordingBackend>(*s.generator);
  return s;
}

std::optional<NerPayload> RelabelNer(std::string_view generation,
                                     std::span<const EntityClause> clauses) {
  NerPayload payload;
  payload.tokens = RelabelTokens(generation);
  const std::vector<std::string> folded = [&] {
    std::vector<std::string> out;
    for (const std::string& t : payload.tokens) out.push_back(CaseFold(t));
    return out;
  }();
  struct Candidate {
    size_t start, length, clause;
  };
  std::vector<Candidate> candidates;
  for (size_t c = 0; c < clauses.size(); ++c) {
    const std::vector<std::string> needle = [&] {
      std::vector<std::string> out;
      for (const std::string& t : RelabelTokens(clauses[c].surface)) {
        out.push_back(CaseFold(t));
      }
      return out;
    }();
    for (size_t at = FindTokenSequence(folded, needle); at != std::string::npos;
         at = FindTokenSequence(folded, needle, at + 1)) {
      candidates.push_back({at, needle.size(), c});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.length != b.length) return a.length > b.length;
                     if (a.start != b.start) return a.start < b.start;
                     return a.clause < b.clause;
                   });
  std::vector<bool> taken(payload.tokens.size(), false);
  for (const Candidate& cand : candidates) {
    bool free = true;
    for (size_t i = cand.start; i < cand.start + cand.length; ++i) {
      free = free && !taken[i];
    }
    if (!free) continue;
    for (size_t i = cand.start; i < cand.start + cand.length; ++i) taken[i] = true;
    payload.spans.push_back({cand.start, cand.start + cand.length,
                             clauses[cand.clause].entity_type});
  }
  if (payload.spans.empty()) return std::nullopt;
  std::sort(payload.spans.begin(), payload.spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) {
              return a.start_token < b.start_token;
            });
  return payload;
}

std::optional<QaPayload> RelabelQa(std::string_view generation,
                                   const QaPayload& gold) {
  if (gold.answer.empty()) return std::nullopt;
  const size_t at = generation.find(gold.answer);
  if (at == std::string_view::npos) return std::nullopt;
  QaPayload out = gold;
  out.answer_start = at;
  return out;
}

AnalysisArtifact RunAnalysis(const Dataset& dataset, const RunConfig& config,
                             GenerationBackend& backend) {
  AnalysisArtifact artifact;
  artifact.length_stats = ComputeLengthStats(dataset);
  if (dataset.task() != TaskKind::kClassification) return artifact;
  if (!config.enable_concept && !config.enable_exclusions) return artifact;
  artifact.spurious = SpuriousPhrases(dataset, config.min_support, config.top_n);
  spdlog::info("mined {} label-correlated phrases", artifact.spurious.size());
  if (config.enable_concept && !artifact.spurious.empty()) {
    artifact.concepts =
        AbstractConcepts(artifact.spurious, dataset, backend,
                         WithSeed(config.sampling, DeriveSeed(config.seed, "concepts")));
  }
  return artifact;
}

std::vector<ConstraintSet> RunExtraction(const Dataset& dataset,
                                         const RunConfig& config,
                                         const AnalysisArtifact& analysis,
                                         Services& services) {
  const size_t slots = SlotsPerRound(config);
  std::optional<SimilarityIndex> index;
  size_t k = 0;
  if (config.rephrase_slots > 0) {
    k = std::min(config.retrieval_k, (dataset.size() - 1) / 2);
    if (k == 0) {
      throw Error(ErrorCode::kInsufficientData,
                  "rephrase slots need at least 3 documents");
    }
    if (k < config.retrieval_k) {
      spdlog::warn("retrieval_k clamped from {} to {} for {} documents",
                   config.retrieval_k, k, dataset.size());
    }
    index.emplace(dataset, *services.embedder);
  }

  // Partner choice per rephrase slot, then one description per partner.
  std::vector<std::vector<size_t>> partners(dataset.size());
  std::set<size_t> needed;
  for (size_t d = 0; d < dataset.size(); ++d) {
    for (size_t r = 0; r < config.rounds; ++r) {
      for (size_t s = config.novel_slots; s < slots; ++s) {
        Rng rng(DeriveSeed(SlotSeed(config.seed, dataset[d].id, s, r), "partner"));
        const size_t p = SamplePartner(*index, d, k, rng);
        partners[d].push_back(p);
        needed.insert(p);
      }
    }
  }
  const std::vector<size_t> to_describe(needed.begin(), needed.end());
  std::vector<std::string> descriptions(dataset.size());
  ParallelFor(to_describe.size(), config.concurrency, [&](size_t i) {
    const Document& doc = dataset[to_describe[i]];
    try {
      descriptions[to_describe[i]] = AbstractDescription(
          doc, *services.recorder,
          WithSeed(config.sampling, DeriveSeed(config.seed, "describe:" + doc.id)));
    } catch (const std::exception& e) {
      spdlog::warn("no description for {}: {}", doc.id, e.what());
    }
  });

  std::optional<SynonymIndex> synonyms;
  if (config.enable_synonyms) {
    synonyms.emplace(dataset, *services.embedder, *services.tagger);
  }
  ExtractionContext ctx{dataset,
                        *services.embedder,
                        *services.tagger,
                        analysis.length_stats,
                        config.enable_concept ? &analysis.concepts : nullptr,
                        analysis.spurious,
                        synonyms ? &*synonyms : nullptr,
                        config.extraction_options()};

  std::vector<ConstraintSet> sets(dataset.size() * config.rounds * slots);
  std::vector<std::string> errors(dataset.size());
  ParallelFor(dataset.size(), config.concurrency, [&](size_t d) {
    const Document& doc = dataset[d];
    try {
      const LexicalConstraint lexical = BuildLexical(doc, ctx);
      size_t partner_i = 0;
      for (size_t r = 0; r < config.rounds; ++r) {
        for (size_t s = 0; s < slots; ++s) {
          SlotSpec spec;
          spec.slot = s;
          spec.round = r;
          if (s >= config.novel_slots) {
            spec.mode = GenerationMode::kRephrase;
            const size_t p = partners[d][partner_i++];
            spec.rephrase = RephraseSource{dataset[p].id, descriptions[p]};
          }
          sets[(d * config.rounds + r) * slots + s] =
              BuildConstraintSet(doc, spec, ctx, config.seed, lexical);
        }
      }
    } catch (const std::exception& e) {
      errors[d] = e.what();
    }
  });
  for (size_t d = 0; d < errors.size(); ++d) {
    if (!errors[d].empty()) {
      throw Error(ErrorCode::kConfigError,
                  "constraint extraction failed for " + dataset[d].id + ": " +
                      errors[d]);
    }
  }
  return sets;
}

std::vector<Instruction> RunVerbalization(std::span<const ConstraintSet> sets,
                                          const RunConfig& config) {
  const LabelPhrasing phrasing = config.phrasing();
  VerbalizerOptions options;
  options.render_exemplars = config.render_exemplars;
  std::vector<Instruction> out;
  out.reserve(sets.size());
  for (const ConstraintSet& cs : sets) {
    out.push_back(Verbalize(cs, config.task, phrasing, options));
  }
  return out;
}

void FinishRecord(AugmentationRecord& record, const Dataset& dataset,
                  const RunConfig& config, const PosTagger& tagger) {
  record.payload.reset();
  record.verdict.reset();
  record.accepted = false;
  if (record.generation.empty()) {
    if (record.rejection_reason.empty()) {
      record.rejection_reason = kRejectGenerationFailed;
    }
    return;
  }
  record.rejection_reason.clear();
  const Document& source = SourceDocument(dataset, record.source_id);
  switch (dataset.task()) {
    case TaskKind::kClassification:
      record.payload = record.constraints.semantic
                           ? record.constraints.semantic->label
                           : source.label();
      break;
    case TaskKind::kNer:
      if (auto ner = RelabelNer(record.generation, record.constraints.entity_clauses)) {
        record.payload = std::move(*ner);
      } else {
        record.rejection_reason = kRejectNoEntity;
      }
      break;
    case TaskKind::kQa:
      if (auto qa = RelabelQa(record.generation, source.qa())) {
        record.payload = std::move(*qa);
      } else {
        record.rejection_reason = kRejectAnswerMissing;
      }
      break;
  }
  record.verdict = ValidateGeneration(record.generation, record.instruction, tagger);
  if (!record.payload) return;
  record.accepted = Accept(record, config.accept_policy);
  if (!record.accepted) record.rejection_reason = kRejectPolicy;
}

std::vector<AugmentationRecord> RunGeneration(
    const Dataset& dataset, std::span<const ConstraintSet> sets,
    std::span<const Instruction> instructions, const RunConfig& config,
    Services& services) {
  if (sets.size() != instructions.size()) {
    throw Error(ErrorCode::kConfigError,
                "constraint sets and instructions differ in count");
  }
  std::vector<AugmentationRecord> records(sets.size());
  ParallelFor(sets.size(), config.concurrency, [&](size_t i) {
    const ConstraintSet& cs = sets[i];
    AugmentationRecord& rec = records[i];
    rec.source_id = cs.source_id;
    rec.mode = cs.mode;
    rec.round = cs.round;
    rec.slot = cs.slot;
    rec.mode_index = cs.mode == GenerationMode::kNovel
                         ? cs.slot
                         : cs.slot - std::min(cs.slot, config.novel_slots);
    rec.constraints = cs;
    rec.instruction = instructions[i];
    if (cs.rephrase && cs.rephrase->description.empty()) {
      rec.rejection_reason = std::string(kRejectGenerationFailed) +
                             ": no description for partner " +
                             cs.rephrase->partner_id;
    } else {
      GenerationRequest request;
      request.prompt = instructions[i].text;
      request.params = WithSeed(
          config.sampling,
          DeriveSeed(SlotSeed(config.seed, cs.source_id, cs.slot, cs.round),
                     "generate"));
      if (config.default_max_tokens) {
        request.params.max_tokens = DefaultMaxTokens(cs.length.upper);
      }
      request.correlation_id = "gen:" + Padded(i, 8);
      request.source_id = cs.source_id;
      try {
        rec.generation = services.recorder->Generate(request).text;
      } catch (const Error& e) {
        rec.rejection_reason = std::string(kRejectGenerationFailed) + ": " +
                               std::string(ErrorCodeName(e.code()));
      } catch (const std::exception& e) {
        rec.rejection_reason = std::string(kRejectGenerationFailed) + ": " + e.what();
      }
    }
    FinishRecord(rec, dataset, config, *services.tagger);
  });
  return records;
}

FaithfulnessReport RunFaithfulness(std::span<const AugmentationRecord> records,
                                   const RunConfig& config) {
  NamedVerdicts set{config.dataset_name, {}};
  for (const AugmentationRecord& r : records) {
    if (r.verdict) set.verdicts.push_back(*r.verdict);
  }
  return BuildFaithfulnessReport(std::span(&set, 1));
}

QualityReport RunQuality(const Dataset& dataset,
                         std::span<const AugmentationRecord> records,
                         const RunConfig& config) {
  QualityReport report;
  const size_t per_source = config.rounds * SlotsPerRound(config);
  std::map<std::string, std::vector<std::string>> by_source;
  std::vector<std::string> accepted_texts;
  for (const AugmentationRecord& r : records) {
    if (!r.accepted) continue;
    by_source[r.source_id].push_back(r.generation);
    accepted_texts.push_back(r.generation);
  }
  std::vector<AugmentationGroup> groups;
  for (const Document& doc : dataset.documents()) {
    const auto it = by_source.find(doc.id);
    if (it != by_source.end() && it->second.size() == per_source) {
      groups.push_back({doc.text, it->second});
    }
  }
  report.augmentations_per_source = per_source;
  report.sources = groups.size();
  report.diversity = Diversity(groups);
  report.length_diversity = LengthDiversity(groups);
  if (accepted_texts.empty()) {
    spdlog::warn("no accepted augmentations; perplexity reported as 0");
    return report;
  }
  if (config.scorer_url.empty()) {
    std::vector<std::string> gold;
    for (const Document& doc : dataset.documents()) gold.push_back(doc.text);
    report.perplexity = Perplexity(accepted_texts, TrigramScorer(gold));
  } else {
    report.perplexity = Perplexity(
        accepted_texts, HttpScorer(config.scorer_url, config.http_options()));
  }
  return report;
}

void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kParseError, path.string() + ": invalid JSON");
  }
  return j;
}

void WriteJsonLines(const std::filesystem::path& path,
                    std::span<const json> lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const json& line : lines) out << line.dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::vector<json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::vector<json> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(number) + ": invalid JSON");
    }
    out.push_back(std::move(j));
  }
  return out;
}

void WriteRunArtifacts(const std::filesystem::path& dir, const RunConfig& config,
                       const Dataset& augmented,
                       std::span<const AugmentationRecord> records,
                       const FaithfulnessReport& faithfulness,
                       const QualityReport& quality) {
  std::filesystem::create_directories(dir);
  std::vector<json> record_lines;
  std::vector<json> rejection_lines;
  for (const AugmentationRecord& r : records) {
    record_lines.push_back(r);
    if (!r.accepted) rejection_lines.push_back(RejectionJson(r));
  }
  WriteJsonLines(dir / "records.jsonl", record_lines);
  WriteJsonLines(dir / "rejections.jsonl", rejection_lines);
  const CorpusFormat format = config.corpus_format();
  SaveDataset(augmented, format, dir / ("augmented." + DatasetExtension(format)));
  WriteJsonFile(dir / "faithfulness.json", faithfulness.ToJson());
  {
    std::ofstream out(dir / "faithfulness.txt", std::ios::binary);
    out << faithfulness.ToTable();
    if (!out) throw Error(ErrorCode::kIoError, "failed writing faithfulness.txt");
  }
  WriteJsonFile(dir / "quality.json", quality.ToJson());
}

RunResult RunAugmentation(const RunConfig& config) {
  config.Validate();
  const Dataset dataset =
      LoadDataset(config.dataset_path, config.corpus_format(), config.task);
  spdlog::info("loaded {} documents from {}", dataset.size(), config.dataset_path);
  Services services = MakeServices(config, dataset);
  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  WriteJsonFile(dir / "config.json", config.ToJson());

  const AnalysisArtifact analysis =
      RunAnalysis(dataset, config, *services.recorder);
  WriteJsonFile(dir / "analysis.json", AnalysisToJson(analysis));

  const std::vector<ConstraintSet> sets =
      RunExtraction(dataset, config, analysis, services);
  const std::vector<Instruction> instructions = RunVerbalization(sets, config);
  {
    std::vector<json> cs_lines(sets.begin(), sets.end());
    WriteJsonLines(dir / "constraints.jsonl", cs_lines);
    std::vector<json> in_lines(instructions.begin(), instructions.end());
    WriteJsonLines(dir / "instructions.jsonl", in_lines);
  }
  spdlog::info("built {} constraint sets", sets.size());

  std::vector<AugmentationRecord> records =
      RunGeneration(dataset, sets, instructions, config, services);
  {
    std::vector<json> gen_lines;
    for (size_t i = 0; i < records.size(); ++i) {
      gen_lines.push_back({{"id", records[i].AugmentedId()},
                           {"correlation_id", "gen:" + Padded(i, 8)},
                           {"source_id", records[i].source_id},
                           {"text", records[i].generation}});
    }
    WriteJsonLines(dir / "generations.jsonl", gen_lines);
    std::vector<json> transcript;
    for (const TranscriptEntry& e : services.recorder->Entries()) {
      json params = {{"temperature", e.params.temperature},
                     {"top_p", e.params.top_p},
                     {"top_k", e.params.top_k},
                     {"max_tokens", e.params.max_tokens},
                     {"seed", e.params.seed ? json(*e.params.seed) : json(nullptr)}};
      transcript.push_back({{"correlation_id", e.correlation_id},
                            {"source_id", e.source_id},
                            {"prompt", e.prompt},
                            {"params", params},
                            {"text", e.text},
                            {"backend", e.backend_id},
                            {"error", e.error}});
    }
    WriteJsonLines(dir / "transcript.jsonl", transcript);
  }

  Dataset augmented = MergeAugmentations(dataset, records);
  FaithfulnessReport faithfulness = RunFaithfulness(records, config);
  QualityReport quality = RunQuality(dataset, records, config);
  WriteRunArtifacts(dir, config, augmented, records, faithfulness, quality);
  size_t accepted = 0;
  for (const AugmentationRecord& r : records) accepted += r.accepted;
  spdlog::info("{} records, {} accepted, {} rejected", records.size(), accepted,
               records.size() - accepted);
  return {std::move(augmented), std::move(records), std::move(faithfulness),
          std::move(quality)};
}

}  // namespace coda
