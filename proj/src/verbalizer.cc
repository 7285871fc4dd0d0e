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

#include "coda/verbalizer.h"

#include <array>

#include "coda/error.h"
#include "coda/textkit.h"

namespace coda {
namespace {

constexpr std::string_view kNovelPreamble =
    "Write a brief document with a single sentence or multiple sentences "
    "with the following constraints:";
constexpr std::string_view kRephrasePreamble =
    "Write a brief document with a single sentence or multiple sentences "
    "corresponding to the following abstract description: ";
constexpr std::string_view kQaNovelPreamble =
    "Write a brief document with multiple sentences corresponding to the "
    "following constraints:";
constexpr std::string_view kQaRephrasePreamble =
    "Write a brief document with multiple sentences corresponding to the "
    "following abstract description: ";
constexpr std::string_view kRephraseSuffix =
    ". Additionally, the document should have the following constraints:";

std::string Preamble(const ConstraintSet& cs, TaskKind task) {
  const bool qa = task == TaskKind::kQa;
  if (cs.mode == GenerationMode::kNovel) {
    return std::string(qa ? kQaNovelPreamble : kNovelPreamble);
  }
  return std::string(qa ? kQaRephrasePreamble : kRephrasePreamble) + "\"" +
         cs.rephrase->description + "\"" + std::string(kRephraseSuffix);
}

std::string KeywordsText(const LexicalConstraint& lexical) {
  std::string text;
  if (!lexical.include.empty()) {
    text = "The document should have the following keywords: ";
    for (size_t g = 0; g < lexical.include.size(); ++g) {
      const KeywordGroup& group = lexical.include[g];
      if (g) text += ", ";
      for (size_t a = 0; a < group.alternatives.size(); ++a) {
        if (a) text += " or ";
        if (group.quoted) {
          text += "\"" + group.alternatives[a] + "\"";
        } else {
          text += group.alternatives[a];
        }
      }
    }
  }
  if (!lexical.exclude.empty()) {
    text += text.empty() ? "The document should not have the following keywords : "
                         : ", but should not have the following keywords : ";
    for (size_t i = 0; i < lexical.exclude.size(); ++i) {
      if (i) text += ", ";
      text += lexical.exclude[i];
    }
  }
  return text + ".";
}

std::string LabelText(const std::string& label, const LabelPhrasing& phrasing) {
  if (const auto it = phrasing.per_label.find(label);
      it != phrasing.per_label.end()) {
    return it->second;
  }
  const size_t at = phrasing.label_template.find("{label}");
  if (at == std::string::npos) {
    throw Error(ErrorCode::kMissingPhrasing,
                "no label clause phrasing for '" + label + "'");
  }
  std::string text = phrasing.label_template;
  text.replace(at, 7, label);
  return text;
}

std::string EntitiesText(const std::vector<EntityClause>& entities,
                         const LabelPhrasing& phrasing) {
  std::string text;
  for (const EntityClause& e : entities) {
    if (!text.empty()) text += ", ";
    text += e.surface + " is " + phrasing.EntityTypeName(e.entity_type);
  }
  return text + ".";
}

constexpr std::array<std::string_view, 6> kClauseKindNames = {
    "keywords", "label", "entities", "pos", "length", "concept"};

}  // namespace

std::string_view ClauseKindName(ClauseKind kind) {
  return kClauseKindNames[static_cast<size_t>(kind)];
}

ClauseKind ParseClauseKind(std::string_view name) {
  for (size_t i = 0; i < kClauseKindNames.size(); ++i) {
    if (kClauseKindNames[i] == name) return static_cast<ClauseKind>(i);
  }
  throw Error(ErrorCode::kParseError, "unknown clause kind '" + std::string(name) + "'");
}

LabelPhrasing LabelPhrasing::Preset(std::string_view name) {
  LabelPhrasing p;
  if (name == "topic") {
    p.label_template = "The document should be on the topic of {label}.";
  } else if (name == "intent") {
    p.label_template = "The document should express the intent of {label}.";
  } else if (name == "ots") {
    p.per_label = {
        {"clearly unfair", "The document's terms of service should be clearly unfair."},
        {"potentially unfair", "The document's terms of service should be potentially unfair."},
        {"clearly fair", "The document's terms of service should be clearly fair."},
    };
  } else if (name != "conll") {
    throw Error(ErrorCode::kConfigError,
                "unknown label phrasing preset '" + std::string(name) + "'");
  }
  return p;
}

std::string LabelPhrasing::EntityTypeName(const std::string& code) const {
  if (const auto it = entity_type_names.find(code); it != entity_type_names.end()) {
    return it->second;
  }
  static const std::map<std::string, std::string> kConllNames = {
      {"LOC", "location"}, {"PER", "person"}, {"ORG", "organization"},
      {"MISC", "miscellaneous"}};
  if (const auto it = kConllNames.find(code); it != kConllNames.end()) {
    return it->second;
  }
  return CaseFold(code);
}

Instruction Verbalize(const ConstraintSet& cs, TaskKind task,
                      const LabelPhrasing& phrasing,
                      const VerbalizerOptions& options) {
  if ((cs.mode == GenerationMode::kRephrase) != cs.rephrase.has_value()) {
    throw Error(ErrorCode::kConfigError,
                "constraint set mode and rephrase source disagree for " +
                    cs.source_id);
  }
  Instruction instruction;
  instruction.source_id = cs.source_id;
  instruction.mode = cs.mode;
  std::string text = Preamble(cs, task);

  const auto add = [&](ClauseKind kind, ClausePayload payload,
                       const std::string& sentence) {
    const size_t number = instruction.clauses.size() + 1;
    instruction.clauses.push_back({number, kind, std::move(payload)});
    text += " " + std::to_string(number) + ". " + sentence;
  };

  if (!cs.lexical.include.empty() || !cs.lexical.exclude.empty()) {
    add(ClauseKind::kKeywords, cs.lexical, KeywordsText(cs.lexical));
  }
  if (task == TaskKind::kClassification && cs.semantic) {
    add(ClauseKind::kLabel, LabelClause{cs.semantic->label},
        LabelText(cs.semantic->label, phrasing));
  }
  if (task == TaskKind::kNer && !cs.entity_clauses.empty()) {
    add(ClauseKind::kEntities, cs.entity_clauses,
        EntitiesText(cs.entity_clauses, phrasing));
  }
  if (cs.syntactic && !cs.syntactic->pos.empty()) {
    add(ClauseKind::kPos, cs.syntactic->pos,
        "The document should have a part-of-speech sequence similar to: " +
            FormatPosSequence(cs.syntactic->pos) + ".");
  }
  add(ClauseKind::kLength, cs.length,
      "The document should have a length of " + std::to_string(cs.length.lower) +
          "-" + std::to_string(cs.length.upper) + " words.");
  if (cs.concept_negation) {
    for (const std::string& c : cs.concept_negation->negated_concepts) {
      add(ClauseKind::kConcept, ConceptClause{c},
          "Any sentence in the document should not include the abstract "
          "concept " + c + ".");
    }
  }
  if (options.render_exemplars && cs.semantic && !cs.semantic->exemplars.empty()) {
    text += "\n\nExamples of documents with this label:";
    for (const std::string& ex : cs.semantic->exemplars) text += "\n- " + ex;
  }
  instruction.text = std::move(text);
  return instruction;
}

}  // namespace coda
