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

#include "coda/mining.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "coda/error.h"

namespace coda {
namespace {

std::string PhraseKey(const TokenSequence& seq, const NGram& gram) {
  std::string key;
  for (size_t i = gram.start; i < gram.end(); ++i) {
    if (!key.empty()) key += ' ';
    key += CaseFold(seq.tokens[i].surface);
  }
  return key;
}

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string StripQuotes(std::string s) {
  while (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                           (s.front() == '\'' && s.back() == '\''))) {
    s = Trim(std::string_view(s).substr(1, s.size() - 2));
  }
  return s;
}

std::string FirstNonEmptyLine(std::string_view text) {
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = Trim(text.substr(pos, end - pos));
    if (!line.empty()) return line;
    pos = end + 1;
  }
  return "";
}

std::string Padded(size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
  return buf;
}

}  // namespace

std::vector<PhraseLabelScore> SpuriousPhrases(const Dataset& dataset,
                                              size_t min_support,
                                              size_t top_n) {
  std::vector<PhraseLabelScore> out;
  if (dataset.task() != TaskKind::kClassification) return out;

  const double total = static_cast<double>(dataset.size());
  std::map<std::string, size_t> label_docs;
  std::unordered_map<std::string, size_t> phrase_docs;
  std::unordered_map<std::string, std::map<std::string, size_t>> joint;
  for (const Document& doc : dataset.documents()) {
    ++label_docs[doc.label()];
    const TokenSequence seq = Tokenize(doc.text);
    std::set<std::string> phrases;
    for (const NGram& gram : ExtractNGrams(seq)) {
      phrases.insert(PhraseKey(seq, gram));
    }
    for (const std::string& phrase : phrases) {
      ++phrase_docs[phrase];
      ++joint[phrase][doc.label()];
    }
  }

  std::map<std::string, std::vector<PhraseLabelScore>> by_label;
  for (const auto& [phrase, per_label] : joint) {
    const double df = static_cast<double>(phrase_docs[phrase]);
    for (const auto& [label, support] : per_label) {
      if (support < min_support) continue;
      const double pmi =
          std::log(static_cast<double>(support) * total /
                   (df * static_cast<double>(label_docs[label])));
      if (!(pmi > 0.0)) continue;
      by_label[label].push_back(
          {phrase, label, pmi * std::log1p(static_cast<double>(support)),
           support});
    }
  }
  for (const std::string& label : dataset.label_inventory()) {
    auto it = by_label.find(label);
    if (it == by_label.end()) continue;
    auto& scored = it->second;
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.phrase < b.phrase;
    });
    if (scored.size() > top_n) scored.resize(top_n);
    out.insert(out.end(), scored.begin(), scored.end());
  }
  return out;
}

std::span<const std::string> ConceptTable::For(const std::string& label) const {
  const auto it = by_label.find(label);
  if (it == by_label.end()) return {};
  return it->second;
}

std::string ConceptPrompt(const std::string& label,
                          std::span<const std::string> phrases,
                          std::span<const std::string> examples) {
  std::string prompt = "These phrases appear in documents labeled " + label + ": ";
  for (size_t i = 0; i < phrases.size(); ++i) {
    if (i) prompt += ", ";
    prompt += phrases[i];
  }
  prompt += ". Example sentences:";
  for (const std::string& ex : examples) prompt += " \"" + ex + "\"";
  prompt +=
      ". Return a short abstract concept (at most 8 words) that these "
      "phrases describe.";
  return prompt;
}

std::string ParseConceptReply(std::string_view reply) {
  std::string line = StripQuotes(FirstNonEmptyLine(reply));
  while (!line.empty() && (line.back() == '.' || line.back() == ' ')) {
    line.pop_back();
  }
  line = StripQuotes(line);
  std::string concept_text;
  size_t words = 0;
  size_t pos = 0;
  while (words < kMaxConceptWords && pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (!concept_text.empty()) concept_text += ' ';
    concept_text += line.substr(pos, end - pos);
    ++words;
    pos = end;
  }
  if (concept_text.empty()) {
    throw Error(ErrorCode::kConceptParseError, "reply holds no concept line");
  }
  return concept_text;
}

std::vector<std::string> ExampleSentences(const Dataset& dataset,
                                          const std::string& label,
                                          const std::string& phrase) {
  std::vector<std::string> out;
  const auto needle = FoldedSurfaces(Tokenize(phrase));
  for (const Document& doc : dataset.documents()) {
    if (doc.label() != label) continue;
    const TokenSequence seq = Tokenize(doc.text);
    const auto folded = FoldedSurfaces(seq);
    for (const SentenceSpan& sentence : SplitSentences(seq)) {
      const std::span<const std::string> window(folded.data() + sentence.begin,
                                                sentence.end - sentence.begin);
      if (FindTokenSequence(window, needle) != std::string::npos) {
        out.emplace_back(seq.Slice(sentence.begin, sentence.end));
        if (out.size() == kConceptExamples) return out;
      }
    }
  }
  return out;
}

ConceptTable AbstractConcepts(std::span<const PhraseLabelScore> phrases,
                              const Dataset& dataset,
                              GenerationBackend& backend,
                              const SamplingParams& params) {
  ConceptTable table;
  std::vector<std::string> labels;
  std::map<std::string, std::vector<const PhraseLabelScore*>> grouped;
  for (const PhraseLabelScore& p : phrases) {
    if (!grouped.contains(p.label)) labels.push_back(p.label);
    grouped[p.label].push_back(&p);
  }
  for (size_t li = 0; li < labels.size(); ++li) {
    const std::string& label = labels[li];
    std::vector<std::string> concepts;
    std::set<std::string> seen;
    const auto& candidates = grouped[label];
    for (size_t pi = 0; pi < candidates.size(); ++pi) {
      if (concepts.size() == kMaxConceptsPerLabel) break;
      const std::string& phrase = candidates[pi]->phrase;
      const auto examples = ExampleSentences(dataset, label, phrase);
      GenerationRequest request;
      request.prompt = ConceptPrompt(label, std::span(&phrase, 1), examples);
      request.params = params;
      request.correlation_id = "concept:" + Padded(li, 4) + ":" + Padded(pi, 4);
      request.source_id = "label:" + label;
      const GenerationResponse response = backend.Generate(request);
      try {
        std::string parsed = ParseConceptReply(response.text);
        if (seen.insert(CaseFold(parsed)).second) {
          concepts.push_back(std::move(parsed));
        }
      } catch (const Error& e) {
        spdlog::warn("skipping concept for label '{}' phrase '{}': {}", label,
                     phrase, e.what());
      }
    }
    if (!concepts.empty()) table.by_label[label] = std::move(concepts);
  }
  return table;
}

SimilarityIndex::SimilarityIndex(const Dataset& dataset,
                                 const EmbeddingBackend& embedder) {
  std::vector<std::string> texts;
  for (const Document& doc : dataset.documents()) {
    ids_.push_back(doc.id);
    texts.push_back(doc.text);
  }
  vectors_ = embedder.Embed(texts);
  if (vectors_.size() != texts.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedder returned a vector count different from the input");
  }
}

double SimilarityIndex::Similarity(size_t a, size_t b) const {
  return Cosine(vectors_[a], vectors_[b]);
}

std::vector<size_t> SimilarityIndex::Neighbors(size_t query) const {
  std::vector<std::pair<double, size_t>> scored;
  scored.reserve(size());
  for (size_t i = 0; i < size(); ++i) {
    if (i != query) scored.emplace_back(Similarity(query, i), i);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<size_t> out;
  out.reserve(scored.size());
  for (const auto& [sim, i] : scored) out.push_back(i);
  return out;
}

std::vector<size_t> PartnerPool(const SimilarityIndex& index, size_t query,
                                size_t k) {
  if (k == 0 || index.size() < 2 * k + 1) {
    throw Error(ErrorCode::kInsufficientData,
                "partner sampling with k=" + std::to_string(k) + " needs " +
                    std::to_string(2 * k + 1) + " documents, have " +
                    std::to_string(index.size()));
  }
  const std::vector<size_t> ranked = index.Neighbors(query);
  std::vector<size_t> pool(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  pool.insert(pool.end(), ranked.end() - static_cast<std::ptrdiff_t>(k), ranked.end());
  return pool;
}

size_t SamplePartner(const SimilarityIndex& index, size_t query, size_t k,
                     Rng& rng) {
  const std::vector<size_t> pool = PartnerPool(index, query, k);
  return pool[UniformIndex(rng, pool.size())];
}

std::string SummaryPrompt(std::string_view text) {
  return "Summarize the following document in one short and concise "
         "sentence: " +
         std::string(text);
}

std::string AbstractDescription(const Document& doc,
                                GenerationBackend& backend,
                                const SamplingParams& params) {
  GenerationRequest request;
  request.prompt = SummaryPrompt(doc.text);
  request.params = params;
  request.correlation_id = "describe:" + doc.id;
  request.source_id = doc.id;
  const GenerationResponse response = backend.Generate(request);
  std::string line = StripQuotes(FirstNonEmptyLine(response.text));
  if (line.empty()) {
    throw Error(ErrorCode::kEmptyReply, "empty description for " + doc.id);
  }
  return line;
}

nlohmann::json AnalysisToJson(const AnalysisArtifact& artifact) {
  nlohmann::json j;
  j["concepts"] = nlohmann::json::object();
  for (const auto& [label, concepts] : artifact.concepts.by_label) {
    j["concepts"][label] = concepts;
  }
  j["spurious"] = nlohmann::json::array();
  for (const PhraseLabelScore& p : artifact.spurious) {
    j["spurious"].push_back({{"phrase", p.phrase},
                             {"label", p.label},
                             {"score", p.score},
                             {"support", p.support}});
  }
  j["length_stats"] = {{"mean", artifact.length_stats.mean},
                       {"sd", artifact.length_stats.sd}};
  return j;
}

AnalysisArtifact AnalysisFromJson(const nlohmann::json& j) {
  AnalysisArtifact artifact;
  try {
    for (const auto& [label, concepts] : j.at("concepts").items()) {
      artifact.concepts.by_label[label] =
          concepts.get<std::vector<std::string>>();
    }
    for (const auto& p : j.at("spurious")) {
      artifact.spurious.push_back({p.at("phrase").get<std::string>(),
                                   p.at("label").get<std::string>(),
                                   p.at("score").get<double>(),
                                   p.at("support").get<size_t>()});
    }
    artifact.length_stats.mean = j.at("length_stats").at("mean").get<double>();
    artifact.length_stats.sd = j.at("length_stats").at("sd").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("analysis.json: ") + e.what());
  }
  return artifact;
}

}  // namespace coda
