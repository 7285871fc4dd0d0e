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

#include "coda/validator.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "coda/porter_stemmer.h"
#include "coda/textkit.h"

namespace coda {
namespace {

// Token-boundary, case-insensitive match of `phrase` against the
// generation's folded token surfaces, punctuation tokens included.
bool Contains(std::span<const std::string> haystack, std::string_view phrase) {
  const std::vector<std::string> needle = FoldedSurfaces(Tokenize(phrase));
  return FindTokenSequence(haystack, needle) != std::string::npos;
}

double Percent(size_t hits, size_t total) {
  return total == 0 ? 0.0
                    : 100.0 * static_cast<double>(hits) /
                          static_cast<double>(total);
}

std::string FormatPercent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

nlohmann::json RowJson(const FaithfulnessRow& row) {
  nlohmann::json j = {{"name", row.name},
                      {"records", row.records},
                      {"lexical", row.lexical},
                      {"lexical_relaxed", row.lexical_relaxed},
                      {"length", row.length},
                      {"length_relaxed", row.length_relaxed}};
  j["concept"] = row.concept_pass ? nlohmann::json(*row.concept_pass)
                                  : nlohmann::json(nullptr);
  j["syntactic_similarity"] = row.syntactic_similarity
                                  ? nlohmann::json(*row.syntactic_similarity)
                                  : nlohmann::json(nullptr);
  return j;
}

}  // namespace

LexicalVerdict CheckLexical(std::string_view generation,
                            const LexicalConstraint& constraint) {
  const std::vector<std::string> folded = FoldedSurfaces(Tokenize(generation));
  LexicalVerdict v;
  v.groups = constraint.include.size();
  for (const KeywordGroup& group : constraint.include) {
    const bool hit = std::any_of(
        group.alternatives.begin(), group.alternatives.end(),
        [&](const std::string& alt) { return Contains(folded, alt); });
    if (hit) ++v.hits;
  }
  v.exclusion_present = std::any_of(
      constraint.exclude.begin(), constraint.exclude.end(),
      [&](const std::string& word) { return Contains(folded, word); });
  v.fraction = v.groups == 0 ? 1.0
                             : static_cast<double>(v.hits) /
                                   static_cast<double>(v.groups);
  // Integer form of hits / groups >= 0.75 avoids rounding at the edge.
  const bool enough = 4 * v.hits >= 3 * v.groups;
  v.strict = v.hits == v.groups && !v.exclusion_present;
  v.relaxed = enough && !v.exclusion_present;
  return v;
}

LengthVerdict CheckLength(std::string_view generation,
                          const LengthConstraint& constraint) {
  LengthVerdict v;
  v.word_count = WordCount(generation);
  const size_t relaxed_lower = (3 * constraint.lower) / 4;
  const size_t relaxed_upper = (5 * constraint.upper + 3) / 4;
  v.strict = constraint.lower <= v.word_count && v.word_count <= constraint.upper;
  v.relaxed = relaxed_lower <= v.word_count && v.word_count <= relaxed_upper;
  return v;
}

std::vector<std::string> ViolatedConcepts(std::string_view generation,
                                          const ConceptConstraint& constraint) {
  std::vector<std::string> violated;
  if (constraint.negated_concepts.empty()) return violated;
  const std::vector<std::string> words = FoldedWords(generation);
  std::set<std::string> stems;
  for (const std::string& w : words) stems.insert(PorterStem(w));
  for (const std::string& concept_text : constraint.negated_concepts) {
    const std::vector<std::string> phrase = FoldedWords(concept_text);
    if (phrase.empty()) continue;
    bool hit = FindTokenSequence(words, phrase) != std::string::npos;
    if (!hit) {
      size_t content = 0;
      bool all = true;
      for (const std::string& w : phrase) {
        if (IsStopword(w)) continue;
        ++content;
        all = all && stems.count(PorterStem(w)) > 0;
      }
      hit = content > 0 && all;
    }
    if (hit) violated.push_back(concept_text);
  }
  return violated;
}

bool CheckConcept(std::string_view generation,
                  const ConceptConstraint& constraint) {
  return ViolatedConcepts(generation, constraint).empty();
}

size_t EditDistance(std::span<const Upos> a, std::span<const Upos> b) {
  std::vector<size_t> prev(b.size() + 1);
  std::vector<size_t> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double CheckSyntactic(std::string_view generation,
                      const SyntacticConstraint& constraint,
                      const PosTagger& tagger) {
  const TokenSequence seq = Tokenize(generation);
  double best = 0.0;
  for (const SentenceSpan& s : SplitSentences(seq)) {
    const PosSequence tags = tagger.Tag(seq, s.begin, s.end);
    const size_t longest = std::max(tags.size(), constraint.pos.size());
    if (longest == 0) continue;
    const double sim =
        1.0 - static_cast<double>(EditDistance(tags, constraint.pos)) /
                  static_cast<double>(longest);
    best = std::max(best, sim);
  }
  return best;
}

FaithfulnessVerdict ValidateGeneration(std::string_view generation,
                                       const Instruction& instruction,
                                       const PosTagger& tagger) {
  FaithfulnessVerdict v;
  LexicalConstraint lexical;
  LengthConstraint length{0, 0};
  bool has_length = false;
  ConceptConstraint concepts;
  bool has_concepts = false;
  std::optional<SyntacticConstraint> syntactic;
  for (const Clause& clause : instruction.clauses) {
    switch (clause.kind) {
      case ClauseKind::kKeywords:
        lexical = std::get<LexicalConstraint>(clause.payload);
        break;
      case ClauseKind::kLength:
        length = std::get<LengthConstraint>(clause.payload);
        has_length = true;
        break;
      case ClauseKind::kConcept:
        concepts.negated_concepts.push_back(
            std::get<ConceptClause>(clause.payload).concept_text);
        has_concepts = true;
        break;
      case ClauseKind::kPos:
        syntactic = SyntacticConstraint{std::get<PosSequence>(clause.payload), 0};
        break;
      case ClauseKind::kLabel:
      case ClauseKind::kEntities:
        break;
    }
  }
  v.lexical = CheckLexical(generation, lexical);
  if (has_length) {
    v.length = CheckLength(generation, length);
  } else {
    v.length = {true, true, WordCount(generation)};
  }
  if (has_concepts) {
    v.violated_concepts = ViolatedConcepts(generation, concepts);
    v.concept_ok = v.violated_concepts.empty();
  }
  if (syntactic) {
    v.syntactic_similarity = CheckSyntactic(generation, *syntactic, tagger);
  }
  return v;
}

FaithfulnessRow SummarizeVerdicts(std::string name,
                                  std::span<const FaithfulnessVerdict> verdicts) {
  FaithfulnessRow row;
  row.name = std::move(name);
  row.records = verdicts.size();
  size_t lex = 0, lex_r = 0, len = 0, len_r = 0, concept_n = 0, concept_ok = 0,
         syn_n = 0;
  double syn_sum = 0.0;
  for (const FaithfulnessVerdict& v : verdicts) {
    lex += v.lexical.strict;
    lex_r += v.lexical.relaxed;
    len += v.length.strict;
    len_r += v.length.relaxed;
    if (v.concept_ok) {
      ++concept_n;
      concept_ok += *v.concept_ok;
    }
    if (v.syntactic_similarity) {
      ++syn_n;
      syn_sum += *v.syntactic_similarity;
    }
  }
  row.lexical = Percent(lex, row.records);
  row.lexical_relaxed = Percent(lex_r, row.records);
  row.length = Percent(len, row.records);
  row.length_relaxed = Percent(len_r, row.records);
  if (concept_n) row.concept_pass = Percent(concept_ok, concept_n);
  if (syn_n) row.syntactic_similarity = syn_sum / static_cast<double>(syn_n);
  return row;
}

FaithfulnessReport BuildFaithfulnessReport(std::span<const NamedVerdicts> sets) {
  FaithfulnessReport report;
  std::vector<FaithfulnessVerdict> all;
  for (const NamedVerdicts& set : sets) {
    report.rows.push_back(SummarizeVerdicts(set.name, set.verdicts));
    all.insert(all.end(), set.verdicts.begin(), set.verdicts.end());
  }
  report.overall = SummarizeVerdicts("Overall", all);
  return report;
}

nlohmann::json FaithfulnessReport::ToJson() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const FaithfulnessRow& row : rows) rows_json.push_back(RowJson(row));
  return {{"rows", rows_json}, {"overall", RowJson(overall)}};
}

std::string FaithfulnessReport::ToTable() const {
  const std::vector<std::string> header = {"Task", "Lexical", "Lexical 75%",
                                           "Length", "Length 75%"};
  std::vector<std::vector<std::string>> cells = {header};
  std::vector<const FaithfulnessRow*> all;
  for (const FaithfulnessRow& row : rows) all.push_back(&row);
  all.push_back(&overall);
  for (const FaithfulnessRow* row : all) {
    cells.push_back({row->name, FormatPercent(row->lexical),
                     FormatPercent(row->lexical_relaxed),
                     FormatPercent(row->length),
                     FormatPercent(row->length_relaxed)});
  }
  std::vector<size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) {
      widths[c] = std::max(widths[c], line[c].size());
    }
  }
  std::ostringstream out;
  for (size_t r = 0; r < cells.size(); ++r) {
    for (size_t c = 0; c < cells[r].size(); ++c) {
      if (c) out << " | ";
      const std::string& cell = cells[r][c];
      // Names align left, numbers right.
      if (c == 0) {
        out << cell << std::string(widths[c] - cell.size(), ' ');
      } else {
        out << std::string(widths[c] - cell.size(), ' ') << cell;
      }
    }
    out << '\n';
    if (r == 0) {
      for (size_t c = 0; c < widths.size(); ++c) {
        if (c) out << "-|-";
        out << std::string(widths[c], '-');
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace coda
