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

#include "coda/constraints.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "coda/error.h"

namespace coda {
namespace {

struct ByteRange {
  size_t begin = 0;
  size_t end = 0;
};

// Byte range of every NER token inside the document text.
std::vector<ByteRange> NerTokenRanges(const Document& doc) {
  std::vector<ByteRange> ranges;
  size_t cursor = 0;
  for (const std::string& token : doc.ner().tokens) {
    const size_t at = doc.text.find(token, cursor);
    if (at == std::string::npos) {
      throw Error(ErrorCode::kPayloadInvalid,
                  "token '" + token + "' of " + doc.id + " not found in text");
    }
    ranges.push_back({at, at + token.size()});
    cursor = at + token.size();
  }
  return ranges;
}

void Occupy(const TokenSequence& seq, ByteRange range,
            std::vector<bool>& occupied) {
  for (size_t i = 0; i < seq.size(); ++i) {
    if (seq.tokens[i].offset < range.end && seq.tokens[i].end() > range.begin) {
      occupied[i] = true;
    }
  }
}

// Token range of the sentence(s) covering [begin, end) bytes.
SentenceSpan CoveringSentences(const TokenSequence& seq, ByteRange range) {
  const auto sentences = SplitSentences(seq);
  SentenceSpan out{seq.size(), 0};
  for (const SentenceSpan& s : sentences) {
    if (s.begin >= s.end) continue;
    const size_t from = seq.tokens[s.begin].offset;
    const size_t to = seq.tokens[s.end - 1].end();
    if (from < std::max(range.end, range.begin + 1) && to > range.begin) {
      out.begin = std::min(out.begin, s.begin);
      out.end = std::max(out.end, s.end);
    }
  }
  if (out.begin >= out.end) return {0, seq.size()};
  return out;
}

std::string StripTerminal(std::string s) {
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?')) {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::string_view GenerationModeName(GenerationMode mode) {
  return mode == GenerationMode::kNovel ? "novel" : "rephrase";
}

GenerationMode ParseGenerationMode(std::string_view name) {
  if (name == "novel") return GenerationMode::kNovel;
  if (name == "rephrase") return GenerationMode::kRephrase;
  throw Error(ErrorCode::kParseError, "unknown mode '" + std::string(name) + "'");
}

size_t DefaultKeywordCount(size_t word_count) {
  const auto scaled =
      static_cast<size_t>(std::ceil(0.15 * static_cast<double>(word_count)));
  return std::max<size_t>(3, scaled);
}

std::vector<ScoredNGram> ScoreNGrams(const TokenSequence& seq,
                                     const EmbeddingBackend& embedder) {
  std::vector<NGram> grams = ExtractNGrams(seq);
  std::vector<ScoredNGram> scored;
  if (grams.empty()) return scored;
  std::vector<std::string> texts;
  texts.reserve(grams.size() + 1);
  texts.push_back(seq.text);
  for (const NGram& g : grams) texts.push_back(g.text);
  const auto vectors = embedder.Embed(texts);
  scored.reserve(grams.size());
  for (size_t i = 0; i < grams.size(); ++i) {
    scored.push_back({std::move(grams[i]), Cosine(vectors[i + 1], vectors[0])});
  }
  return scored;
}

std::vector<size_t> SelectKeywords(std::span<const ScoredNGram> scored,
                                   size_t k, std::vector<bool> occupied) {
  std::vector<size_t> order(scored.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const ScoredNGram& x = scored[a];
    const ScoredNGram& y = scored[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.gram.start != y.gram.start) return x.gram.start < y.gram.start;
    return x.gram.n < y.gram.n;
  });
  std::vector<size_t> picked;
  std::set<std::string> texts;
  for (size_t idx : order) {
    if (picked.size() >= k) break;
    const NGram& gram = scored[idx].gram;
    if (gram.end() > occupied.size()) occupied.resize(gram.end(), false);
    bool free = true;
    for (size_t t = gram.start; t < gram.end(); ++t) free = free && !occupied[t];
    if (!free || texts.contains(CaseFold(gram.text))) continue;
    for (size_t t = gram.start; t < gram.end(); ++t) occupied[t] = true;
    texts.insert(CaseFold(gram.text));
    picked.push_back(idx);
  }
  return picked;
}

std::vector<EntityClause> EntityClauses(const Document& doc) {
  std::vector<EntityClause> clauses;
  const auto ranges = NerTokenRanges(doc);
  auto spans = doc.ner().spans;
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    return a.start_token < b.start_token;
  });
  for (const EntitySpan& span : spans) {
    const size_t from = ranges[span.start_token].begin;
    EntityClause clause{doc.text.substr(from, ranges[span.end_token - 1].end - from),
                        span.entity_type};
    if (std::find(clauses.begin(), clauses.end(), clause) == clauses.end()) {
      clauses.push_back(std::move(clause));
    }
  }
  return clauses;
}

std::string AnswerSentence(const Document& doc) {
  const QaPayload& qa = doc.qa();
  const TokenSequence seq = Tokenize(doc.text);
  const SentenceSpan s = CoveringSentences(
      seq, {qa.answer_start, qa.answer_start + qa.answer.size()});
  return std::string(seq.Slice(s.begin, s.end));
}

LexicalConstraint ExtractLexical(const Document& doc, TaskKind task, size_t k,
                                 const EmbeddingBackend& embedder) {
  const TokenSequence seq = Tokenize(doc.text);
  std::vector<bool> occupied(seq.size(), false);
  std::vector<KeywordGroup> leading;
  std::vector<KeywordGroup> trailing;
  std::set<std::string> mandatory_texts;

  if (task == TaskKind::kNer) {
    const auto ranges = NerTokenRanges(doc);
    for (const EntitySpan& span : doc.ner().spans) {
      Occupy(seq, {ranges[span.start_token].begin, ranges[span.end_token - 1].end},
             occupied);
    }
    for (const EntityClause& clause : EntityClauses(doc)) {
      if (mandatory_texts.insert(CaseFold(clause.surface)).second) {
        leading.push_back({{clause.surface}, true, false});
      }
    }
  } else if (task == TaskKind::kQa) {
    const QaPayload& qa = doc.qa();
    const SentenceSpan s = CoveringSentences(
        seq, {qa.answer_start, qa.answer_start + qa.answer.size()});
    for (size_t i = s.begin; i < s.end; ++i) occupied[i] = true;
    const std::string sentence = StripTerminal(std::string(seq.Slice(s.begin, s.end)));
    mandatory_texts.insert(CaseFold(sentence));
    trailing.push_back({{sentence}, true, true});
  }

  std::vector<ScoredNGram> scored = ScoreNGrams(seq, embedder);
  std::erase_if(scored, [&](const ScoredNGram& s) {
    return mandatory_texts.contains(CaseFold(s.gram.text));
  });
  LexicalConstraint lexical;
  lexical.include = std::move(leading);
  for (size_t idx : SelectKeywords(scored, k, occupied)) {
    lexical.include.push_back({{scored[idx].gram.text}, false, false});
  }
  lexical.include.insert(lexical.include.end(), trailing.begin(), trailing.end());
  return lexical;
}

SyntacticConstraint ExtractSyntactic(const Document& doc, Rng& rng,
                                     const PosTagger& tagger) {
  const TokenSequence seq = Tokenize(doc.text);
  const auto sentences = SplitSentences(seq);
  SyntacticConstraint out;
  if (sentences.empty()) return out;
  out.source_sentence_index = UniformIndex(rng, sentences.size());
  const SentenceSpan& s = sentences[out.source_sentence_index];
  out.pos = tagger.Tag(seq, s.begin, s.end);
  return out;
}

SemanticConstraint ExtractSemantic(const Document& doc, const Dataset& dataset,
                                   Rng& rng) {
  SemanticConstraint out;
  out.label = doc.label();
  std::vector<size_t> eligible;
  for (size_t i = 0; i < dataset.size(); ++i) {
    const Document& other = dataset[i];
    if (other.id != doc.id && other.text != doc.text &&
        other.label() == out.label) {
      eligible.push_back(i);
    }
  }
  out.exemplar_order_seed = rng();
  Rng order(out.exemplar_order_seed);
  const size_t count = std::min<size_t>(3, eligible.size());
  if (count < 3) {
    spdlog::info("document {} has only {} same-label exemplars", doc.id, count);
  }
  for (size_t pick : SampleWithoutReplacement(order, eligible.size(), count)) {
    out.exemplars.push_back(dataset[eligible[pick]].text);
    out.exemplar_ids.push_back(dataset[eligible[pick]].id);
  }
  return out;
}

LengthConstraint ExtractLength(size_t word_count, const LengthStats& stats) {
  const double length = static_cast<double>(word_count);
  const long long lower = std::max(1LL, std::llround(length - stats.sd));
  const long long upper = std::max(lower, std::llround(length + stats.sd));
  return {static_cast<size_t>(lower), static_cast<size_t>(upper)};
}

LengthConstraint ExtractLength(const Document& doc, const LengthStats& stats) {
  return ExtractLength(WordCount(doc.text), stats);
}

ConceptConstraint ExtractConcept(const std::string& label,
                                 const ConceptTable& table) {
  const auto concepts = table.For(label);
  return {std::vector<std::string>(concepts.begin(), concepts.end())};
}

SynonymIndex::SynonymIndex(const Dataset& dataset,
                           const EmbeddingBackend& embedder,
                           const PosTagger& tagger)
    : embedder_(embedder), tagger_(tagger) {
  std::set<std::string> words;
  for (const Document& doc : dataset.documents()) {
    for (std::string& w : FoldedWords(doc.text)) {
      if (!IsStopword(w)) words.insert(std::move(w));
    }
  }
  std::vector<std::string> list(words.begin(), words.end());
  const auto vectors = embedder_.Embed(list);
  for (size_t i = 0; i < list.size(); ++i) {
    const PosSequence tags = tagger_.Tag(Tokenize(list[i]));
    if (tags.size() != 1) continue;
    vocabulary_.push_back({list[i], tags.front(), vectors[i]});
  }
}

std::optional<std::string> SynonymIndex::Nearest(const std::string& word) const {
  const std::string folded = CaseFold(word);
  const PosSequence tags = tagger_.Tag(Tokenize(folded));
  if (tags.size() != 1) return std::nullopt;
  const EmbeddingVector query = embedder_.EmbedOne(folded);
  std::optional<std::string> best;
  double best_score = 0.0;
  for (const Entry& e : vocabulary_) {
    if (e.word == folded || e.tag != tags.front()) continue;
    const double score = Cosine(query, e.vector);
    if (score > best_score) {
      best_score = score;
      best = e.word;
    }
  }
  return best;
}

uint64_t SlotSeed(uint64_t run_seed, const std::string& doc_id, size_t slot,
                  size_t round) {
  return DeriveSeed(run_seed, doc_id + "#" + std::to_string(slot) + "#" +
                                  std::to_string(round));
}

LexicalConstraint BuildLexical(const Document& doc,
                               const ExtractionContext& ctx) {
  const size_t k = ctx.options.k_keywords > 0
                       ? ctx.options.k_keywords
                       : DefaultKeywordCount(WordCount(doc.text));
  LexicalConstraint lexical =
      ExtractLexical(doc, ctx.dataset.task(), k, ctx.embedder);

  std::set<std::string> used;
  for (const KeywordGroup& g : lexical.include) {
    for (const std::string& alt : g.alternatives) used.insert(CaseFold(alt));
  }
  if (ctx.options.enable_synonyms && ctx.synonyms) {
    for (KeywordGroup& g : lexical.include) {
      if (g.mandatory || g.alternatives.front().find(' ') != std::string::npos) {
        continue;
      }
      const auto synonym = ctx.synonyms->Nearest(g.alternatives.front());
      if (synonym && used.insert(*synonym).second) {
        g.alternatives.push_back(*synonym);
      }
    }
  }
  if (ctx.options.enable_exclusions &&
      ctx.dataset.task() == TaskKind::kClassification) {
    for (const PhraseLabelScore& p : ctx.spurious) {
      if (lexical.exclude.size() == 3) break;
      if (p.label == doc.label() && !used.contains(CaseFold(p.phrase))) {
        lexical.exclude.push_back(p.phrase);
      }
    }
  }
  return lexical;
}

ConstraintSet BuildConstraintSet(const Document& doc, const SlotSpec& slot,
                                 const ExtractionContext& ctx,
                                 uint64_t run_seed,
                                 const std::optional<LexicalConstraint>& lexical) {
  if ((slot.mode == GenerationMode::kRephrase) != slot.rephrase.has_value()) {
    throw Error(ErrorCode::kConfigError,
                "rephrase slots need a partner description, novel slots none");
  }
  ConstraintSet cs;
  cs.source_id = doc.id;
  cs.mode = slot.mode;
  cs.slot = slot.slot;
  cs.round = slot.round;
  cs.rephrase = slot.rephrase;
  cs.lexical = lexical ? *lexical : BuildLexical(doc, ctx);
  cs.length = ExtractLength(doc, ctx.length_stats);

  const uint64_t seed = SlotSeed(run_seed, doc.id, slot.slot, slot.round);
  const auto enable_syntactic = [&] {
    if (!ctx.options.enable_syntactic) return;
    Rng rng(DeriveSeed(seed, "syntactic"));
    SyntacticConstraint syn = ExtractSyntactic(doc, rng, ctx.tagger);
    if (!syn.pos.empty()) cs.syntactic = std::move(syn);
  };

  switch (ctx.dataset.task()) {
    case TaskKind::kClassification: {
      Rng rng(DeriveSeed(seed, "semantic"));
      cs.semantic = ExtractSemantic(doc, ctx.dataset, rng);
      enable_syntactic();
      if (ctx.options.enable_concept) {
        cs.concept_negation = ctx.concepts ? ExtractConcept(doc.label(), *ctx.concepts)
                                           : ConceptConstraint{};
      }
      break;
    }
    case TaskKind::kNer:
      cs.entity_clauses = EntityClauses(doc);
      enable_syntactic();
      break;
    case TaskKind::kQa:
      cs.answer_clause = AnswerSentence(doc);
      break;
  }
  return cs;
}

}  // namespace coda
