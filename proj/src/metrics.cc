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

#include "coda/metrics.h"

#include <cmath>
#include <cstdlib>
#include <set>

#include "coda/error.h"
#include "coda/textkit.h"

namespace coda {
namespace {

constexpr char kBos[] = "<s>";
constexpr char kEos[] = "</s>";
constexpr char kUnk[] = "<unk>";

std::set<std::string> Types(std::string_view text) {
  const std::vector<std::string> words = FoldedWords(text);
  return {words.begin(), words.end()};
}

void CheckGroupSizes(std::span<const AugmentationGroup> groups) {
  for (const AugmentationGroup& g : groups) {
    if (g.augmentations.size() != groups.front().augmentations.size()) {
      throw Error(ErrorCode::kGroupSizeMismatch,
                  "augmentation groups differ in size: " +
                      std::to_string(g.augmentations.size()) + " vs " +
                      std::to_string(groups.front().augmentations.size()));
    }
  }
}

}  // namespace

UniformScorer::UniformScorer(size_t vocabulary_size)
    : vocabulary_size_(vocabulary_size) {
  if (vocabulary_size_ == 0) {
    throw Error(ErrorCode::kConfigError, "uniform scorer needs a vocabulary");
  }
}

std::vector<TextScore> UniformScorer::Score(
    std::span<const std::string> texts) const {
  std::vector<TextScore> out;
  out.reserve(texts.size());
  const long double per_token =
      -std::log(static_cast<long double>(vocabulary_size_));
  for (const std::string& text : texts) {
    const size_t n = FoldedWords(text).size() + 1;
    out.push_back({per_token * static_cast<long double>(n), n});
  }
  return out;
}

TrigramScorer::TrigramScorer(std::span<const std::string> training_texts,
                             double alpha)
    : alpha_(alpha) {
  if (!(alpha_ > 0.0)) {
    throw Error(ErrorCode::kConfigError, "trigram smoothing must be positive");
  }
  for (const std::string& text : training_texts) {
    for (const std::string& w : FoldedWords(text)) ++vocabulary_[w];
  }
  for (const std::string& text : training_texts) {
    const std::vector<std::string> tokens = ScoredTokens(text);
    std::string u = kBos;
    std::string v = kBos;
    for (const std::string& w : tokens) {
      ++trigrams_[{u, v, w}];
      ++contexts_[{u, v}];
      u = std::move(v);
      v = w;
    }
  }
}

std::vector<std::string> TrigramScorer::ScoredTokens(
    const std::string& text) const {
  std::vector<std::string> tokens;
  for (std::string& w : FoldedWords(text)) {
    tokens.push_back(vocabulary_.count(w) ? std::move(w) : std::string(kUnk));
  }
  tokens.emplace_back(kEos);
  return tokens;
}

std::vector<TextScore> TrigramScorer::Score(
    std::span<const std::string> texts) const {
  const double v_size = static_cast<double>(vocabulary_size());
  std::vector<TextScore> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    const std::vector<std::string> tokens = ScoredTokens(text);
    TextScore score;
    std::string u = kBos;
    std::string v = kBos;
    for (const std::string& w : tokens) {
      const auto tri = trigrams_.find({u, v, w});
      const auto ctx = contexts_.find({u, v});
      const double num =
          (tri == trigrams_.end() ? 0.0 : static_cast<double>(tri->second)) +
          alpha_;
      const double den =
          (ctx == contexts_.end() ? 0.0 : static_cast<double>(ctx->second)) +
          alpha_ * v_size;
      score.log_prob += std::log(static_cast<long double>(num) / den);
      ++score.token_count;
      u = std::move(v);
      v = w;
    }
    out.push_back(score);
  }
  return out;
}

HttpScorer::HttpScorer(std::string base_url, HttpOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {}

std::vector<TextScore> HttpScorer::Score(
    std::span<const std::string> texts) const {
  nlohmann::json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  HttpReply reply;
  try {
    reply = PostJson(base_url_, "/score", body, options_);
  } catch (const Error& e) {
    throw Error(ErrorCode::kScorerUnavailable, e.what());
  }
  if (reply.status != 200) {
    throw Error(ErrorCode::kScorerUnavailable,
                "score returned HTTP " + std::to_string(reply.status) + ": " +
                    ErrorMessage(reply));
  }
  const nlohmann::json parsed = nlohmann::json::parse(reply.body, nullptr, false);
  if (!parsed.is_object() || !parsed.contains("logprobs") ||
      !parsed.contains("token_counts") || !parsed["logprobs"].is_array() ||
      !parsed["token_counts"].is_array() ||
      parsed["logprobs"].size() != texts.size() ||
      parsed["token_counts"].size() != texts.size()) {
    throw Error(ErrorCode::kScorerUnavailable,
                "score response lacks per-text logprobs and token_counts");
  }
  std::vector<TextScore> out;
  for (size_t i = 0; i < texts.size(); ++i) {
    const auto& lp = parsed["logprobs"][i];
    const auto& tc = parsed["token_counts"][i];
    if (!lp.is_number() || !tc.is_number_integer() || tc.get<long long>() < 0) {
      throw Error(ErrorCode::kScorerUnavailable, "malformed score entry");
    }
    out.push_back({lp.get<double>(), tc.get<size_t>()});
  }
  return out;
}

double Perplexity(std::span<const std::string> texts, const LmScorer& scorer) {
  long double log_prob = 0.0L;
  size_t tokens = 0;
  for (const TextScore& s : scorer.Score(texts)) {
    log_prob += s.log_prob;
    tokens += s.token_count;
  }
  if (tokens == 0) {
    throw Error(ErrorCode::kInsufficientData, "perplexity over zero tokens");
  }
  return static_cast<double>(
      std::exp(-log_prob / static_cast<long double>(tokens)));
}

double Diversity(std::span<const AugmentationGroup> groups) {
  if (groups.empty()) return 0.0;
  CheckGroupSizes(groups);
  double total = 0.0;
  for (const AugmentationGroup& g : groups) {
    const std::set<std::string> source = Types(g.source_text);
    std::set<std::string> introduced;
    for (const std::string& aug : g.augmentations) {
      for (const std::string& t : Types(aug)) {
        if (!source.count(t)) introduced.insert(t);
      }
    }
    total += static_cast<double>(introduced.size());
  }
  return total / static_cast<double>(groups.size());
}

double LengthDiversity(std::span<const AugmentationGroup> groups) {
  if (groups.empty()) return 0.0;
  CheckGroupSizes(groups);
  double total = 0.0;
  size_t pairs = 0;
  for (const AugmentationGroup& g : groups) {
    const long long source = static_cast<long long>(WordCount(g.source_text));
    for (const std::string& aug : g.augmentations) {
      total += static_cast<double>(
          std::llabs(static_cast<long long>(WordCount(aug)) - source));
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

nlohmann::json QualityReport::ToJson() const {
  return {{"perplexity", perplexity},
          {"diversity", diversity},
          {"length_diversity", length_diversity},
          {"augmentations_per_source", augmentations_per_source},
          {"sources", sources}};
}

}  // namespace coda
