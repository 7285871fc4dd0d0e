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

#include "coda/embedding.h"

#include <cmath>
#include <map>
#include <set>

#include "coda/error.h"
#include "coda/rng.h"
#include "coda/textkit.h"
#include "json.hpp"

namespace coda {
namespace {

std::vector<std::string> EmbeddingTerms(const std::string& text) {
  const TokenSequence seq = Tokenize(text);
  std::vector<std::string> terms;
  for (const Token& t : seq.tokens) {
    if (!t.punctuation) terms.push_back(CaseFold(t.surface));
  }
  if (terms.empty()) {
    for (const Token& t : seq.tokens) terms.push_back(t.surface);
  }
  return terms;
}

}  // namespace

double Cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with dimensions " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingVector EmbeddingBackend::EmbedOne(const std::string& text) const {
  auto vectors = Embed(std::span<const std::string>(&text, 1));
  return std::move(vectors.front());
}

HashedTfidfEmbedder::HashedTfidfEmbedder(std::span<const std::string> corpus)
    : num_docs_(corpus.size()) {
  for (const std::string& text : corpus) {
    const auto terms = EmbeddingTerms(text);
    for (const std::string& term : std::set<std::string>(terms.begin(),
                                                         terms.end())) {
      ++doc_freq_[term];
    }
  }
}

double HashedTfidfEmbedder::Idf(const std::string& folded_term) const {
  if (num_docs_ == 0) return 1.0;
  const auto it = doc_freq_.find(folded_term);
  const double df = it == doc_freq_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(num_docs_)) / (1.0 + df)) + 1.0;
}

size_t HashedTfidfEmbedder::Bucket(const std::string& folded_term) {
  return static_cast<size_t>(StableHash(folded_term) % kDimension);
}

std::vector<EmbeddingVector> HashedTfidfEmbedder::Embed(
    std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    EmbeddingVector v(kDimension, 0.0);
    std::map<std::string, size_t> tf;
    for (auto& term : EmbeddingTerms(text)) ++tf[term];
    for (const auto& [term, count] : tf) {
      v[Bucket(term)] += static_cast<double>(count) * Idf(term);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(std::string base_url,
                                           HttpOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {}

std::vector<EmbeddingVector> HttpEmbeddingBackend::Embed(
    std::span<const std::string> texts) const {
  nlohmann::json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  const HttpReply reply = PostJson(base_url_, "/embed", body, options_);
  if (reply.status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                "embed returned HTTP " + std::to_string(reply.status) + ": " +
                    ErrorMessage(reply));
  }
  return ParseEmbedResponse(reply.body, texts.size());
}

std::vector<EmbeddingVector> ParseEmbedResponse(const std::string& body,
                                                size_t expected_count) {
  const nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
  if (!parsed.is_object() || !parsed.contains("vectors") ||
      !parsed["vectors"].is_array()) {
    throw Error(ErrorCode::kBackendUnavailable,
                "embed response lacks a \"vectors\" array");
  }
  const auto& vectors = parsed["vectors"];
  if (vectors.size() != expected_count) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(expected_count) +
                    " vectors, got " + std::to_string(vectors.size()));
  }
  std::vector<EmbeddingVector> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (!v.is_array() || v.empty()) {
      throw Error(ErrorCode::kDimensionMismatch, "empty or non-array vector");
    }
    EmbeddingVector values;
    values.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) {
        throw Error(ErrorCode::kBackendUnavailable, "non-numeric vector entry");
      }
      values.push_back(x.get<double>());
    }
    if (!out.empty() && values.size() != out.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "ragged batch: dimension " + std::to_string(values.size()) +
                      " vs " + std::to_string(out.front().size()));
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace coda
