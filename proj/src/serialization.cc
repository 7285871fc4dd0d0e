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

#include "coda/serialization.h"

#include "coda/error.h"

namespace coda {
namespace {

using nlohmann::json;

template <typename T>
json OptionalToJson(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> OptionalFromJson(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const EntitySpan& v) {
  j = {{"start", v.start_token}, {"end", v.end_token}, {"type", v.entity_type}};
}

void from_json(const json& j, EntitySpan& v) {
  j.at("start").get_to(v.start_token);
  j.at("end").get_to(v.end_token);
  j.at("type").get_to(v.entity_type);
}

json PayloadToJson(const Payload& payload) {
  if (const auto* label = std::get_if<ClassLabel>(&payload)) {
    return {{"type", "label"}, {"label", *label}};
  }
  if (const auto* ner = std::get_if<NerPayload>(&payload)) {
    return {{"type", "ner"}, {"tokens", ner->tokens}, {"spans", ner->spans}};
  }
  const QaPayload& qa = std::get<QaPayload>(payload);
  return {{"type", "qa"},
          {"question", qa.question},
          {"answer", qa.answer},
          {"answer_start", qa.answer_start},
          {"title", qa.title}};
}

Payload PayloadFromJson(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "label") return j.at("label").get<std::string>();
  if (type == "ner") {
    NerPayload ner;
    j.at("tokens").get_to(ner.tokens);
    j.at("spans").get_to(ner.spans);
    return ner;
  }
  if (type == "qa") {
    QaPayload qa;
    j.at("question").get_to(qa.question);
    j.at("answer").get_to(qa.answer);
    j.at("answer_start").get_to(qa.answer_start);
    j.at("title").get_to(qa.title);
    return qa;
  }
  throw Error(ErrorCode::kParseError, "unknown payload type '" + type + "'");
}

void to_json(json& j, const KeywordGroup& v) {
  j = {{"alternatives", v.alternatives},
       {"mandatory", v.mandatory},
       {"quoted", v.quoted}};
}

void from_json(const json& j, KeywordGroup& v) {
  j.at("alternatives").get_to(v.alternatives);
  v.mandatory = j.value("mandatory", false);
  v.quoted = j.value("quoted", false);
}

void to_json(json& j, const LexicalConstraint& v) {
  j = {{"include", v.include}, {"exclude", v.exclude}};
}

void from_json(const json& j, LexicalConstraint& v) {
  j.at("include").get_to(v.include);
  v.exclude = j.value("exclude", std::vector<std::string>{});
}

void to_json(json& j, const SyntacticConstraint& v) {
  j = {{"pos", FormatPosSequence(v.pos)},
       {"source_sentence_index", v.source_sentence_index}};
}

void from_json(const json& j, SyntacticConstraint& v) {
  v.pos = ParsePosSequence(j.at("pos").get<std::string>());
  v.source_sentence_index = j.value("source_sentence_index", size_t{0});
}

void to_json(json& j, const SemanticConstraint& v) {
  j = {{"label", v.label},
       {"exemplars", v.exemplars},
       {"exemplar_ids", v.exemplar_ids},
       {"exemplar_order_seed", v.exemplar_order_seed}};
}

void from_json(const json& j, SemanticConstraint& v) {
  j.at("label").get_to(v.label);
  v.exemplars = j.value("exemplars", std::vector<std::string>{});
  v.exemplar_ids = j.value("exemplar_ids", std::vector<std::string>{});
  v.exemplar_order_seed = j.value("exemplar_order_seed", uint64_t{0});
}

void to_json(json& j, const LengthConstraint& v) {
  j = {{"lower", v.lower}, {"upper", v.upper}};
}

void from_json(const json& j, LengthConstraint& v) {
  j.at("lower").get_to(v.lower);
  j.at("upper").get_to(v.upper);
}

void to_json(json& j, const ConceptConstraint& v) {
  j = {{"negated_concepts", v.negated_concepts}};
}

void from_json(const json& j, ConceptConstraint& v) {
  j.at("negated_concepts").get_to(v.negated_concepts);
}

void to_json(json& j, const EntityClause& v) {
  j = {{"surface", v.surface}, {"type", v.entity_type}};
}

void from_json(const json& j, EntityClause& v) {
  j.at("surface").get_to(v.surface);
  j.at("type").get_to(v.entity_type);
}

void to_json(json& j, const RephraseSource& v) {
  j = {{"partner_id", v.partner_id}, {"description", v.description}};
}

void from_json(const json& j, RephraseSource& v) {
  j.at("partner_id").get_to(v.partner_id);
  j.at("description").get_to(v.description);
}

void to_json(json& j, const ConstraintSet& v) {
  j = {{"source_id", v.source_id},
       {"mode", GenerationModeName(v.mode)},
       {"slot", v.slot},
       {"round", v.round},
       {"rephrase", OptionalToJson(v.rephrase)},
       {"lexical", v.lexical},
       {"syntactic", OptionalToJson(v.syntactic)},
       {"semantic", OptionalToJson(v.semantic)},
       {"length", v.length},
       {"concept", OptionalToJson(v.concept_negation)},
       {"entity_clauses", v.entity_clauses},
       {"answer_clause", OptionalToJson(v.answer_clause)}};
}

void from_json(const json& j, ConstraintSet& v) {
  j.at("source_id").get_to(v.source_id);
  v.mode = ParseGenerationMode(j.at("mode").get<std::string>());
  v.slot = j.value("slot", size_t{0});
  v.round = j.value("round", size_t{0});
  v.rephrase = OptionalFromJson<RephraseSource>(j, "rephrase");
  j.at("lexical").get_to(v.lexical);
  v.syntactic = OptionalFromJson<SyntacticConstraint>(j, "syntactic");
  v.semantic = OptionalFromJson<SemanticConstraint>(j, "semantic");
  j.at("length").get_to(v.length);
  v.concept_negation = OptionalFromJson<ConceptConstraint>(j, "concept");
  v.entity_clauses = j.value("entity_clauses", std::vector<EntityClause>{});
  v.answer_clause = OptionalFromJson<std::string>(j, "answer_clause");
}

void to_json(json& j, const Clause& v) {
  j = {{"number", v.number}, {"kind", ClauseKindName(v.kind)}};
  switch (v.kind) {
    case ClauseKind::kKeywords:
      j["value"] = std::get<LexicalConstraint>(v.payload);
      break;
    case ClauseKind::kLabel:
      j["value"] = std::get<LabelClause>(v.payload).label;
      break;
    case ClauseKind::kEntities:
      j["value"] = std::get<std::vector<EntityClause>>(v.payload);
      break;
    case ClauseKind::kPos:
      j["value"] = FormatPosSequence(std::get<PosSequence>(v.payload));
      break;
    case ClauseKind::kLength:
      j["value"] = std::get<LengthConstraint>(v.payload);
      break;
    case ClauseKind::kConcept:
      j["value"] = std::get<ConceptClause>(v.payload).concept_text;
      break;
  }
}

void from_json(const json& j, Clause& v) {
  j.at("number").get_to(v.number);
  v.kind = ParseClauseKind(j.at("kind").get<std::string>());
  const json& value = j.at("value");
  switch (v.kind) {
    case ClauseKind::kKeywords:
      v.payload = value.get<LexicalConstraint>();
      break;
    case ClauseKind::kLabel:
      v.payload = LabelClause{value.get<std::string>()};
      break;
    case ClauseKind::kEntities:
      v.payload = value.get<std::vector<EntityClause>>();
      break;
    case ClauseKind::kPos:
      v.payload = ParsePosSequence(value.get<std::string>());
      break;
    case ClauseKind::kLength:
      v.payload = value.get<LengthConstraint>();
      break;
    case ClauseKind::kConcept:
      v.payload = ConceptClause{value.get<std::string>()};
      break;
  }
}

void to_json(json& j, const Instruction& v) {
  j = {{"source_id", v.source_id},
       {"mode", GenerationModeName(v.mode)},
       {"text", v.text},
       {"clauses", v.clauses}};
}

void from_json(const json& j, Instruction& v) {
  j.at("source_id").get_to(v.source_id);
  v.mode = ParseGenerationMode(j.at("mode").get<std::string>());
  j.at("text").get_to(v.text);
  j.at("clauses").get_to(v.clauses);
}

void to_json(json& j, const LexicalVerdict& v) {
  j = {{"strict", v.strict},       {"relaxed", v.relaxed},
       {"fraction", v.fraction},   {"hits", v.hits},
       {"groups", v.groups},       {"exclusion_present", v.exclusion_present}};
}

void from_json(const json& j, LexicalVerdict& v) {
  j.at("strict").get_to(v.strict);
  j.at("relaxed").get_to(v.relaxed);
  j.at("fraction").get_to(v.fraction);
  j.at("hits").get_to(v.hits);
  j.at("groups").get_to(v.groups);
  j.at("exclusion_present").get_to(v.exclusion_present);
}

void to_json(json& j, const LengthVerdict& v) {
  j = {{"strict", v.strict}, {"relaxed", v.relaxed}, {"word_count", v.word_count}};
}

void from_json(const json& j, LengthVerdict& v) {
  j.at("strict").get_to(v.strict);
  j.at("relaxed").get_to(v.relaxed);
  j.at("word_count").get_to(v.word_count);
}

void to_json(json& j, const FaithfulnessVerdict& v) {
  j = {{"lexical", v.lexical},
       {"length", v.length},
       {"concept", OptionalToJson(v.concept_ok)},
       {"violated_concepts", v.violated_concepts},
       {"syntactic_similarity", OptionalToJson(v.syntactic_similarity)}};
}

void from_json(const json& j, FaithfulnessVerdict& v) {
  j.at("lexical").get_to(v.lexical);
  j.at("length").get_to(v.length);
  v.concept_ok = OptionalFromJson<bool>(j, "concept");
  v.violated_concepts = j.value("violated_concepts", std::vector<std::string>{});
  v.syntactic_similarity = OptionalFromJson<double>(j, "syntactic_similarity");
}

void to_json(json& j, const AugmentationRecord& v) {
  j = {{"id", v.AugmentedId()},
       {"source_id", v.source_id},
       {"mode", GenerationModeName(v.mode)},
       {"round", v.round},
       {"slot", v.slot},
       {"mode_index", v.mode_index},
       {"constraints", v.constraints},
       {"instruction", v.instruction},
       {"generation", v.generation},
       {"payload", v.payload ? PayloadToJson(*v.payload) : json(nullptr)},
       {"verdict", OptionalToJson(v.verdict)},
       {"accepted", v.accepted},
       {"rejection_reason", v.rejection_reason}};
}

void from_json(const json& j, AugmentationRecord& v) {
  j.at("source_id").get_to(v.source_id);
  v.mode = ParseGenerationMode(j.at("mode").get<std::string>());
  j.at("round").get_to(v.round);
  j.at("slot").get_to(v.slot);
  j.at("mode_index").get_to(v.mode_index);
  j.at("constraints").get_to(v.constraints);
  j.at("instruction").get_to(v.instruction);
  j.at("generation").get_to(v.generation);
  if (j.contains("payload") && !j.at("payload").is_null()) {
    v.payload = PayloadFromJson(j.at("payload"));
  } else {
    v.payload.reset();
  }
  v.verdict = OptionalFromJson<FaithfulnessVerdict>(j, "verdict");
  j.at("accepted").get_to(v.accepted);
  v.rejection_reason = j.value("rejection_reason", std::string());
}

}  // namespace coda
