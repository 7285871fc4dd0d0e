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

#include <random>

#include <gtest/gtest.h>

#include "coda/error.h"
#include "coda/serialization.h"
#include "test_util.h"

namespace coda {
namespace {

using ::coda::testing::ReadFile;
using ::coda::testing::SourcePath;

ConstraintSet LoadGolden(const std::string& name) {
  return nlohmann::json::parse(ReadFile(SourcePath("tests/golden/" + name + ".constraints.json")))
      .get<ConstraintSet>();
}

std::string GoldenText(const std::string& name) {
  return ReadFile(SourcePath("tests/golden/" + name + ".instruction.txt"));
}

struct GoldenCase {
  std::string name;
  TaskKind task;
  std::string preset;
};

class GoldenTest : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(GoldenTest, ByteEqual) {
  const GoldenCase& c = GetParam();
  const Instruction got = Verbalize(LoadGolden(c.name), c.task, LabelPhrasing::Preset(c.preset),
                                    {.render_exemplars = false});
  EXPECT_EQ(got.text, GoldenText(c.name));
}

INSTANTIATE_TEST_SUITE_P(
    Fixtures, GoldenTest,
    ::testing::Values(GoldenCase{"yahoo_novel", TaskKind::kClassification, "topic"},
                      GoldenCase{"yahoo_rephrase", TaskKind::kClassification, "topic"},
                      GoldenCase{"ots_novel", TaskKind::kClassification, "ots"},
                      GoldenCase{"conll_novel", TaskKind::kNer, "conll"},
                      GoldenCase{"squad_novel", TaskKind::kQa, "topic"}),
    [](const auto& info) { return info.param.name; });

TEST(VerbalizeTest, GoldenClauseStrings) {
  EXPECT_NE(GoldenText("yahoo_novel").find("length of 13-19 words"), std::string::npos);
  EXPECT_NE(GoldenText("ots_novel").find(
                "The document's terms of service should be clearly unfair."),
            std::string::npos);
  EXPECT_NE(GoldenText("conll_novel").find(
                "Israel is location, Arafat is person, West Bank is location"),
            std::string::npos);
}

TEST(VerbalizeTest, PreamblesByMode) {
  const auto novel = Verbalize(LoadGolden("yahoo_novel"), TaskKind::kClassification,
                               LabelPhrasing::Preset("topic"), {.render_exemplars = false});
  EXPECT_EQ(novel.text.rfind("Write a brief document with a single sentence or multiple "
                             "sentences with the following constraints: 1. ",
                             0),
            0u);
  const auto rephrase = Verbalize(LoadGolden("yahoo_rephrase"), TaskKind::kClassification,
                                  LabelPhrasing::Preset("topic"), {.render_exemplars = false});
  EXPECT_EQ(rephrase.mode, GenerationMode::kRephrase);
  EXPECT_EQ(rephrase.text.rfind("Write a brief document with a single sentence or multiple "
                                "sentences corresponding to the following abstract "
                                "description: \"",
                                0),
            0u);
}

TEST(VerbalizeTest, ClauseMapRecoversConstraintValues) {
  const ConstraintSet cs = LoadGolden("ots_novel");
  const Instruction ins = Verbalize(cs, TaskKind::kClassification, LabelPhrasing::Preset("ots"));
  std::vector<std::string> concepts;
  for (const Clause& c : ins.clauses) {
    switch (c.kind) {
      case ClauseKind::kKeywords:
        EXPECT_EQ(std::get<LexicalConstraint>(c.payload), cs.lexical);
        break;
      case ClauseKind::kLabel:
        EXPECT_EQ(std::get<LabelClause>(c.payload).label, cs.semantic->label);
        break;
      case ClauseKind::kPos:
        EXPECT_EQ(std::get<PosSequence>(c.payload), cs.syntactic->pos);
        break;
      case ClauseKind::kLength:
        EXPECT_EQ(std::get<LengthConstraint>(c.payload), cs.length);
        break;
      case ClauseKind::kConcept:
        concepts.push_back(std::get<ConceptClause>(c.payload).concept_text);
        break;
      case ClauseKind::kEntities:
        ADD_FAILURE() << "no entity clause expected";
    }
  }
  EXPECT_EQ(concepts, cs.concept_negation->negated_concepts);
}

TEST(VerbalizeTest, NumberingIsConsecutiveUnderAnyToggle) {
  const ConstraintSet base = LoadGolden("ots_novel");
  std::mt19937 gen(17);
  for (int trial = 0; trial < 64; ++trial) {
    ConstraintSet cs = base;
    if (trial & 1) cs.syntactic.reset();
    if (trial & 2) cs.concept_negation.reset();
    if (trial & 4) cs.lexical = {};
    if (trial & 8) cs.concept_negation = ConceptConstraint{};
    if (trial & 16) cs.lexical.exclude.clear();
    if (trial & 32) cs.semantic->exemplars.clear();
    const Instruction ins =
        Verbalize(cs, TaskKind::kClassification, LabelPhrasing::Preset("ots"));
    size_t pos = 0;
    for (size_t i = 0; i < ins.clauses.size(); ++i) {
      EXPECT_EQ(ins.clauses[i].number, i + 1);
      const std::string marker = " " + std::to_string(i + 1) + ". ";
      const size_t at = ins.text.find(marker, pos);
      ASSERT_NE(at, std::string::npos) << marker;
      pos = at + marker.size();
    }
    EXPECT_EQ(ins.text.find(" " + std::to_string(ins.clauses.size() + 1) + ". The", pos),
              std::string::npos);
  }
}

TEST(VerbalizeTest, Deterministic) {
  for (const std::string name : {"yahoo_novel", "yahoo_rephrase", "ots_novel"}) {
    const ConstraintSet cs = LoadGolden(name);
    const auto phrasing = LabelPhrasing::Preset(name == "ots_novel" ? "ots" : "topic");
    EXPECT_EQ(Verbalize(cs, TaskKind::kClassification, phrasing),
              Verbalize(cs, TaskKind::kClassification, phrasing));
  }
}

TEST(VerbalizeTest, ExemplarBlockFollowsClauses) {
  ConstraintSet cs = LoadGolden("yahoo_novel");
  cs.semantic->exemplars = {"First text.", "Second text.", "Third text."};
  const std::string text =
      Verbalize(cs, TaskKind::kClassification, LabelPhrasing::Preset("topic")).text;
  const std::string block =
      "\n\nExamples of documents with this label:\n- First text.\n- Second text.\n- Third text.";
  ASSERT_GE(text.size(), block.size());
  EXPECT_EQ(text.substr(text.size() - block.size()), block);
  EXPECT_EQ(text.substr(0, text.size() - block.size()), GoldenText("yahoo_novel"));
}

TEST(VerbalizeTest, MissingPhrasing) {
  const ConstraintSet cs = LoadGolden("yahoo_novel");
  LabelPhrasing empty;
  try {
    Verbalize(cs, TaskKind::kClassification, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPhrasing);
  }
  empty.per_label[cs.semantic->label] = "Custom sentence.";
  EXPECT_NE(Verbalize(cs, TaskKind::kClassification, empty).text.find("2. Custom sentence."),
            std::string::npos);
}

TEST(VerbalizeTest, ModeMismatchRejected) {
  ConstraintSet cs = LoadGolden("yahoo_novel");
  cs.mode = GenerationMode::kRephrase;
  EXPECT_THROW(Verbalize(cs, TaskKind::kClassification, LabelPhrasing::Preset("topic")), Error);
}

TEST(LabelPhrasingTest, PresetsAndEntityNames) {
  EXPECT_THROW(LabelPhrasing::Preset("nope"), Error);
  const LabelPhrasing conll = LabelPhrasing::Preset("conll");
  EXPECT_EQ(conll.EntityTypeName("LOC"), "location");
  EXPECT_EQ(conll.EntityTypeName("PER"), "person");
  EXPECT_EQ(conll.EntityTypeName("GENE"), "gene");
  EXPECT_FALSE(LabelPhrasing::Preset("intent").label_template.empty());
}

TEST(ClauseKindTest, NamesRoundTrip) {
  for (ClauseKind k : {ClauseKind::kKeywords, ClauseKind::kLabel, ClauseKind::kEntities,
                       ClauseKind::kPos, ClauseKind::kLength, ClauseKind::kConcept}) {
    EXPECT_EQ(ParseClauseKind(ClauseKindName(k)), k);
  }
}

}  // namespace
}  // namespace coda
