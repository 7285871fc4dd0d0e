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

#ifndef CODA_EMBEDDING_H_
#define CODA_EMBEDDING_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "coda/http_util.h"

namespace coda {

using EmbeddingVector = std::vector<double>;

// Cosine similarity; zero vectors compare as 0.
double Cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Implementations must accept concurrent Embed calls.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  // One vector per input, in input order.
  virtual std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) const = 0;

  EmbeddingVector EmbedOne(const std::string& text) const;
};

// Offline fallback: hashed bag of case-folded words weighted by TF-IDF,
// L2-normalized. Text without any word token hashes its punctuation
// tokens instead so non-empty input never maps to the zero vector.
class HashedTfidfEmbedder : public EmbeddingBackend {
 public:
  static constexpr size_t kDimension = 256;

  // All terms get idf 1.
  HashedTfidfEmbedder() = default;
  // Smoothed idf ln((1 + N) / (1 + df)) + 1 fit on `corpus`.
  explicit HashedTfidfEmbedder(std::span<const std::string> corpus);

  std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) const override;

  double Idf(const std::string& folded_term) const;
  static size_t Bucket(const std::string& folded_term);

 private:
  size_t num_docs_ = 0;
  std::unordered_map<std::string, size_t> doc_freq_;
};

// POST {base_url}/embed {"texts": [...]} -> {"vectors": [[...]]}.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  HttpEmbeddingBackend(std::string base_url, HttpOptions options);

  std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) const override;

 private:
  std::string base_url_;
  HttpOptions options_;
};

// Validates an /embed response body: one vector per text, all of one
// dimension. Throws kDimensionMismatch or kBackendUnavailable.
std::vector<EmbeddingVector> ParseEmbedResponse(const std::string& body,
                                                size_t expected_count);

}  // namespace coda

#endif  // CODA_EMBEDDING_H_
