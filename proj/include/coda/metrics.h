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

#ifndef CODA_METRICS_H_
#define CODA_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "coda/corpus.h"
#include "coda/http_util.h"
#include "json.hpp"

namespace coda {

struct TextScore {
  // Natural log, summed over scored tokens. Extended precision keeps the
  // perplexity of a uniform model exactly equal to its vocabulary size.
  long double log_prob = 0.0L;
  size_t token_count = 0;  // tokens scored, including end of text
};

// Implementations are safe for concurrent use.
class LmScorer {
 public:
  virtual ~LmScorer() = default;
  virtual std::vector<TextScore> Score(
      std::span<const std::string> texts) const = 0;
};

// Every token, including end of text, has probability 1 / vocabulary_size.
class UniformScorer : public LmScorer {
 public:
  explicit UniformScorer(size_t vocabulary_size);
  std::vector<TextScore> Score(
      std::span<const std::string> texts) const override;

 private:
  size_t vocabulary_size_;
};

// Word trigram model with additive smoothing over case-folded words.
// Each text is padded with two <s> and one </s>; unseen words map to <unk>.
// P(w | u v) = (c(u v w) + alpha) / (c(u v) + alpha * |V|), where V holds
// the training types plus </s> and <unk>.
class TrigramScorer : public LmScorer {
 public:
  static constexpr double kDefaultAlpha = 0.1;

  explicit TrigramScorer(std::span<const std::string> training_texts,
                         double alpha = kDefaultAlpha);

  std::vector<TextScore> Score(
      std::span<const std::string> texts) const override;

  size_t vocabulary_size() const { return vocabulary_.size() + 2; }

  // Tokens a text is scored over: folded words mapped to <unk> when
  // unseen, then </s>.
  std::vector<std::string> ScoredTokens(const std::string& text) const;

 private:
  using Context = std::pair<std::string, std::string>;
  double alpha_;
  std::map<std::string, size_t> vocabulary_;
  std::map<std::tuple<std::string, std::string, std::string>, size_t> trigrams_;
  std::map<Context, size_t> contexts_;
};

// POST {base_url}/score {"texts": [...]} ->
// {"logprobs": [...], "token_counts": [...]}.
class HttpScorer : public LmScorer {
 public:
  HttpScorer(std::string base_url, HttpOptions options);
  std::vector<TextScore> Score(
      std::span<const std::string> texts) const override;

 private:
  std::string base_url_;
  HttpOptions options_;
};

// exp(-sum log p / sum tokens) over all texts.
double Perplexity(std::span<const std::string> texts, const LmScorer& scorer);

// Augmentation texts of one source document.
struct AugmentationGroup {
  std::string source_text;
  std::vector<std::string> augmentations;
};

// Mean over sources of |types(augs) \ types(source)|, with types being
// case-folded non-punctuation tokens. Throws kGroupSizeMismatch when groups
// differ in size.
double Diversity(std::span<const AugmentationGroup> groups);

// Mean over all (source, augmentation) pairs of |words(aug) - words(src)|.
double LengthDiversity(std::span<const AugmentationGroup> groups);

struct QualityReport {
  double perplexity = 0.0;
  double diversity = 0.0;
  double length_diversity = 0.0;
  size_t augmentations_per_source = 0;
  size_t sources = 0;

  nlohmann::json ToJson() const;
};

}  // namespace coda

#endif  // CODA_METRICS_H_
