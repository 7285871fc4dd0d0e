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

// coda: command-line front end for the constrained augmentation pipeline.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "coda/corpus.h"
#include "coda/error.h"
#include "coda/pipeline.h"
#include "coda/serialization.h"

namespace {

namespace fs = std::filesystem;
using coda::RunConfig;

// Flags that override fields of the (optional) JSON config.
class ConfigFlags {
 public:
  void Register(CLI::App* app) {
    app->add_option("-c,--config", config_path_, "JSON run config");
    Add(app, "--task", task_, "classification, ner or qa",
        [this](RunConfig& c) { c.task = coda::ParseTaskKind(task_); });
    Add(app, "--dataset", dataset_, "dataset file",
        [this](RunConfig& c) { c.dataset_path = dataset_; });
    Add(app, "--format", format_, "jsonl, conll or squad",
        [this](RunConfig& c) { c.format = coda::ParseCorpusFormat(format_); });
    Add(app, "--name", name_, "dataset name for reports",
        [this](RunConfig& c) { c.dataset_name = name_; });
    Add(app, "-o,--output", output_, "output directory",
        [this](RunConfig& c) { c.output_dir = output_; });
    Add(app, "--seed", seed_, "run seed", [this](RunConfig& c) { c.seed = seed_; });
    Add(app, "--rounds", rounds_, "augmentation rounds",
        [this](RunConfig& c) { c.rounds = rounds_; });
    Add(app, "--novel-slots", novel_, "novel slots per round",
        [this](RunConfig& c) { c.novel_slots = novel_; });
    Add(app, "--rephrase-slots", rephrase_, "rephrase slots per round",
        [this](RunConfig& c) { c.rephrase_slots = rephrase_; });
    Add(app, "--k-keywords", k_keywords_, "keywords per document (0: default)",
        [this](RunConfig& c) { c.k_keywords = k_keywords_; });
    Add(app, "--retrieval-k", retrieval_k_, "partner pool half size",
        [this](RunConfig& c) { c.retrieval_k = retrieval_k_; });
    Add(app, "--enable-syntactic", syntactic_, "POS sequence constraint",
        [this](RunConfig& c) { c.enable_syntactic = syntactic_; });
    Add(app, "--enable-concept", concept_, "concept negation constraint",
        [this](RunConfig& c) { c.enable_concept = concept_; });
    Add(app, "--enable-synonyms", synonyms_, "keyword alternatives",
        [this](RunConfig& c) { c.enable_synonyms = synonyms_; });
    Add(app, "--enable-exclusions", exclusions_, "excluded keywords",
        [this](RunConfig& c) { c.enable_exclusions = exclusions_; });
    Add(app, "--temperature", temperature_, "sampling temperature",
        [this](RunConfig& c) { c.sampling.temperature = temperature_; });
    Add(app, "--top-p", top_p_, "nucleus sampling mass",
        [this](RunConfig& c) { c.sampling.top_p = top_p_; });
    Add(app, "--top-k", top_k_, "top-k sampling",
        [this](RunConfig& c) { c.sampling.top_k = top_k_; });
    Add(app, "--max-tokens", max_tokens_, "generation token cap",
        [this](RunConfig& c) {
          c.sampling.max_tokens = max_tokens_;
          c.default_max_tokens = false;
        });
    Add(app, "--backend", backend_, "generation backend: mock, mock:drop=R or URL",
        [this](RunConfig& c) { c.backend_url = backend_; });
    Add(app, "--embed-url", embed_url_, "embedding service",
        [this](RunConfig& c) { c.embed_url = embed_url_; });
    Add(app, "--tagger-url", tagger_url_, "POS tagging service",
        [this](RunConfig& c) { c.tagger_url = tagger_url_; });
    Add(app, "--scorer-url", scorer_url_, "LM scoring service",
        [this](RunConfig& c) { c.scorer_url = scorer_url_; });
    Add(app, "--concurrency", concurrency_, "parallel requests",
        [this](RunConfig& c) { c.concurrency = concurrency_; });
    Add(app, "--accept-policy", policy_, "all, strict or relaxed",
        [this](RunConfig& c) { c.accept_policy = coda::ParseAcceptPolicy(policy_); });
    Add(app, "--min-support", min_support_, "phrase mining support",
        [this](RunConfig& c) { c.min_support = min_support_; });
    Add(app, "--top-n", top_n_, "phrases kept per label",
        [this](RunConfig& c) { c.top_n = top_n_; });
    Add(app, "--label-phrasing", phrasing_, "preset: topic, intent, ots, conll",
        [this](RunConfig& c) { c.label_phrasing = phrasing_; });
    Add(app, "--render-exemplars", exemplars_, "append exemplars to prompts",
        [this](RunConfig& c) { c.render_exemplars = exemplars_; });
    Add(app, "--retries", retries_, "HTTP retries",
        [this](RunConfig& c) { c.retries = retries_; });
    Add(app, "--timeout-ms", timeout_ms_, "HTTP timeout",
        [this](RunConfig& c) { c.timeout_ms = timeout_ms_; });
  }

  RunConfig Resolve() const {
    RunConfig config;
    if (!config_path_.empty()) config = coda::LoadRunConfig(config_path_);
    else coda::ApplyEnvironment(config);
    for (const auto& [option, apply] : overrides_) {
      if (option->count() > 0) apply(config);
    }
    config.Validate();
    return config;
  }

 private:
  template <typename T>
  void Add(CLI::App* app, const std::string& name, T& target,
           const std::string& help, std::function<void(RunConfig&)> apply) {
    overrides_.emplace_back(app->add_option(name, target, help), std::move(apply));
  }

  std::string config_path_;
  std::string task_, dataset_, format_, name_, output_, backend_, embed_url_,
      tagger_url_, scorer_url_, policy_, phrasing_;
  uint64_t seed_ = 0;
  size_t rounds_ = 1, novel_ = 3, rephrase_ = 2, k_keywords_ = 0,
         retrieval_k_ = 5, concurrency_ = 4, min_support_ = 5, top_n_ = 10;
  bool syntactic_ = false, concept_ = true, synonyms_ = false,
       exclusions_ = false, exemplars_ = true;
  double temperature_ = 0.5, top_p_ = 1.0;
  int top_k_ = 50, max_tokens_ = 256, retries_ = 2, timeout_ms_ = 60000;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides_;
};

coda::Dataset LoadConfigured(const RunConfig& config) {
  if (config.dataset_path.empty()) {
    throw coda::Error(coda::ErrorCode::kConfigError, "no dataset given");
  }
  return coda::LoadDataset(config.dataset_path, config.corpus_format(), config.task);
}

template <typename T>
std::vector<T> ReadLines(const fs::path& path) {
  std::vector<T> out;
  for (const nlohmann::json& j : coda::ReadJsonLines(path)) out.push_back(j.get<T>());
  return out;
}

coda::AnalysisArtifact LoadOrRunAnalysis(const RunConfig& config,
                                         const coda::Dataset& dataset,
                                         coda::Services& services) {
  const fs::path path = fs::path(config.output_dir) / "analysis.json";
  if (fs::exists(path)) return coda::AnalysisFromJson(coda::ReadJsonFile(path));
  coda::AnalysisArtifact analysis =
      coda::RunAnalysis(dataset, config, *services.recorder);
  fs::create_directories(config.output_dir);
  coda::WriteJsonFile(path, coda::AnalysisToJson(analysis));
  return analysis;
}

void WriteRecordsAndReports(const RunConfig& config, const coda::Dataset& dataset,
                            const std::vector<coda::AugmentationRecord>& records) {
  const coda::Dataset augmented = coda::MergeAugmentations(dataset, records);
  coda::WriteRunArtifacts(config.output_dir, config, augmented, records,
                          coda::RunFaithfulness(records, config),
                          coda::RunQuality(dataset, records, config));
}

int CmdSplit(const std::string& input, const std::string& format_name,
             const std::string& task_name, size_t n, uint64_t seed,
             const std::string& output) {
  const coda::TaskKind task = coda::ParseTaskKind(task_name);
  const coda::CorpusFormat format = format_name.empty()
                                        ? coda::DefaultFormat(task)
                                        : coda::ParseCorpusFormat(format_name);
  const coda::Dataset full = coda::LoadDataset(input, format, task);
  const coda::Dataset split = coda::SampleLowResource(full, n, seed);
  coda::SaveDataset(split, format, output);
  spdlog::info("wrote {} of {} documents to {}", split.size(), full.size(), output);
  return 0;
}

int CmdAnalyze(const RunConfig& config) {
  const coda::Dataset dataset = LoadConfigured(config);
  coda::Services services = coda::MakeServices(config, dataset);
  const coda::AnalysisArtifact analysis =
      coda::RunAnalysis(dataset, config, *services.recorder);
  fs::create_directories(config.output_dir);
  coda::WriteJsonFile(fs::path(config.output_dir) / "analysis.json",
                      coda::AnalysisToJson(analysis));
  return 0;
}

int CmdExtract(const RunConfig& config) {
  const coda::Dataset dataset = LoadConfigured(config);
  coda::Services services = coda::MakeServices(config, dataset);
  const coda::AnalysisArtifact analysis =
      LoadOrRunAnalysis(config, dataset, services);
  const auto sets = coda::RunExtraction(dataset, config, analysis, services);
  const auto instructions = coda::RunVerbalization(sets, config);
  const fs::path dir = config.output_dir;
  coda::WriteJsonLines(dir / "constraints.jsonl",
                       std::vector<nlohmann::json>(sets.begin(), sets.end()));
  coda::WriteJsonLines(dir / "instructions.jsonl",
                       std::vector<nlohmann::json>(instructions.begin(),
                                                   instructions.end()));
  spdlog::info("wrote {} constraint sets to {}", sets.size(), dir.string());
  return 0;
}

int CmdAugment(const RunConfig& config) {
  const coda::Dataset dataset = LoadConfigured(config);
  coda::Services services = coda::MakeServices(config, dataset);
  const fs::path dir = config.output_dir;
  const auto sets = ReadLines<coda::ConstraintSet>(dir / "constraints.jsonl");
  const auto instructions = ReadLines<coda::Instruction>(dir / "instructions.jsonl");
  const auto records =
      coda::RunGeneration(dataset, sets, instructions, config, services);
  std::vector<nlohmann::json> gen_lines;
  for (const auto& r : records) {
    gen_lines.push_back({{"id", r.AugmentedId()},
                         {"source_id", r.source_id},
                         {"text", r.generation}});
  }
  coda::WriteJsonLines(dir / "generations.jsonl", gen_lines);
  WriteRecordsAndReports(config, dataset, records);
  return 0;
}

int CmdValidate(const RunConfig& config) {
  const coda::Dataset dataset = LoadConfigured(config);
  coda::Services services = coda::MakeServices(config, dataset);
  auto records = ReadLines<coda::AugmentationRecord>(
      fs::path(config.output_dir) / "records.jsonl");
  for (auto& r : records) coda::FinishRecord(r, dataset, config, *services.tagger);
  WriteRecordsAndReports(config, dataset, records);
  std::cout << coda::RunFaithfulness(records, config).ToTable();
  return 0;
}

int CmdMetrics(const RunConfig& config) {
  const coda::Dataset dataset = LoadConfigured(config);
  const auto records = ReadLines<coda::AugmentationRecord>(
      fs::path(config.output_dir) / "records.jsonl");
  const coda::QualityReport quality = coda::RunQuality(dataset, records, config);
  coda::WriteJsonFile(fs::path(config.output_dir) / "quality.json", quality.ToJson());
  std::cout << quality.ToJson().dump(2) << '\n';
  return 0;
}

int CmdRun(RunConfig config, const std::string& sweep) {
  if (sweep.empty()) {
    const coda::RunResult result = coda::RunAugmentation(config);
    std::cout << result.faithfulness.ToTable();
    return 0;
  }
  // "A..B" runs every round count in the range into its own directory.
  const size_t dots = sweep.find("..");
  if (dots == std::string::npos) {
    throw coda::Error(coda::ErrorCode::kConfigError,
                      "--rounds-sweep expects A..B, got '" + sweep + "'");
  }
  size_t lo = 0, hi = 0;
  try {
    lo = std::stoul(sweep.substr(0, dots));
    hi = std::stoul(sweep.substr(dots + 2));
  } catch (const std::exception&) {
    throw coda::Error(coda::ErrorCode::kConfigError, "bad --rounds-sweep '" + sweep + "'");
  }
  if (lo == 0 || hi < lo) {
    throw coda::Error(coda::ErrorCode::kConfigError, "bad --rounds-sweep '" + sweep + "'");
  }
  const fs::path base = config.output_dir;
  for (size_t r = lo; r <= hi; ++r) {
    config.rounds = r;
    config.output_dir = (base / ("rounds-" + std::to_string(r))).string();
    const coda::RunResult result = coda::RunAugmentation(config);
    std::cout << "rounds=" << r << '\n' << result.faithfulness.ToTable();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained data augmentation with instruction-following models"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string split_input, split_format, split_task = "classification", split_output;
  size_t split_n = 100;
  uint64_t split_seed = 0;
  CLI::App* split = app.add_subcommand("split", "seeded low-resource subsample");
  split->add_option("--input", split_input, "full training set")->required();
  split->add_option("--format", split_format, "jsonl, conll or squad");
  split->add_option("--task", split_task, "classification, ner or qa");
  split->add_option("-n,--n", split_n, "documents to keep");
  split->add_option("--seed", split_seed, "sampling seed");
  split->add_option("-o,--output", split_output, "output file")->required();

  struct Stage {
    const char* name;
    const char* help;
    ConfigFlags flags;
    CLI::App* app = nullptr;
  };
  std::vector<Stage> stages;
  stages.reserve(6);
  stages.push_back({"analyze", "mine label-correlated phrases and concepts", {}});
  stages.push_back({"extract", "build constraint sets and instructions", {}});
  stages.push_back({"augment", "generate, relabel and validate", {}});
  stages.push_back({"validate", "re-check stored records", {}});
  stages.push_back({"metrics", "perplexity and diversity of accepted records", {}});
  stages.push_back({"run", "end-to-end pipeline", {}});
  for (Stage& stage : stages) {
    stage.app = app.add_subcommand(stage.name, stage.help);
    stage.flags.Register(stage.app);
  }
  std::string sweep;
  stages.back().app->add_option("--rounds-sweep", sweep,
                                "run each round count in A..B");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (split->parsed()) {
      return CmdSplit(split_input, split_format, split_task, split_n, split_seed,
                      split_output);
    }
    for (Stage& stage : stages) {
      if (!stage.app->parsed()) continue;
      const RunConfig config = stage.flags.Resolve();
      const std::string name = stage.name;
      if (name == "analyze") return CmdAnalyze(config);
      if (name == "extract") return CmdExtract(config);
      if (name == "augment") return CmdAugment(config);
      if (name == "validate") return CmdValidate(config);
      if (name == "metrics") return CmdMetrics(config);
      if (name == "run") return CmdRun(config, sweep);
    }
  } catch (const coda::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return 1;
  }
  return 1;
}
