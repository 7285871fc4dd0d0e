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

#include <gtest/gtest.h>

#include "coda/error.h"
#include "coda/record.h"
#include "test_util.h"

namespace coda {
namespace {

template <typename T>
T RoundTrip(const T& value) {
  const nlohmann::json j = value;
  return nlohmann::json::parse(j.dump()).get<T>();
}

ConstraintSet Golden(const std::string& name) {
  return nlohmann::json::parse(
             testing::ReadFile(testing::SourcePath("tests/golden/" + name + ".constraints.json")))
      .get<ConstraintSet>();
}

TEST(SerializationTest, GoldenConstraintSetsRoundTrip) {
  for (const std::string name :
       {"yahoo_novel", "yahoo_rephrase", "ots_novel", "conll_novel", "squad_novel"}) {
    const ConstraintSet cs = Golden(name);
    EXPECT_EQ(RoundTrip(cs), cs) << name;
  }
}

TEST(SerializationTest, OptionalFieldsAreNull) {
  ConstraintSet cs;
  cs.source_id = "d";
  const nlohmann::json j = cs;
  EXPECT_TRUE(j["rephrase"].is_null());
  EXPECT_TRUE(j["syntactic"].is_null());
  EXPECT_TRUE(j["semantic"].is_null());
  EXPECT_TRUE(j["concept"].is_null());
  EXPECT_TRUE(j["answer_clause"].is_null());
  EXPECT_EQ(j["mode"], "novel");
  EXPECT_EQ(RoundTrip(cs), cs);
}

TEST(SerializationTest, PayloadsCarryTypeTags) {
  const Payload label = std::string("Sports");
  const Payload ner = NerPayload{{"Israel", "approves"}, {{0, 1, "LOC"}}};
  const Payload qa = QaPayload{"When?", "June 24, 2003", 12, "Beyonc\xC3\xA9"};
  EXPECT_EQ(PayloadToJson(label)["type"], "label");
  EXPECT_EQ(PayloadToJson(ner)["type"], "ner");
  EXPECT_EQ(PayloadToJson(qa)["type"], "qa");
  for (const Payload& p : {label, ner, qa}) EXPECT_EQ(PayloadFromJson(PayloadToJson(p)), p);
  EXPECT_THROW(PayloadFromJson({{"type", "other"}}), Error);
}

TEST(SerializationTest, InstructionRoundTripKeepsClauseMap) {
  for (const std::string name : {"yahoo_rephrase", "ots_novel"}) {
    const Instruction ins =
        Verbalize(Golden(name), TaskKind::kClassification,
                  LabelPhrasing::Preset(name == "ots_novel" ? "ots" : "topic"));
    EXPECT_EQ(RoundTrip(ins), ins);
  }
  const Instruction ner =
      Verbalize(Golden("conll_novel"), TaskKind::kNer, LabelPhrasing::Preset("conll"));
  EXPECT_EQ(RoundTrip(ner), ner);
  const nlohmann::json clause = ner.clauses[1];
  EXPECT_EQ(clause["number"], 2);
  EXPECT_EQ(clause["kind"], ClauseKindName(ClauseKind::kEntities));
}

TEST(SerializationTest, AugmentationRecordRoundTrip) {
  AugmentationRecord r;
  r.source_id = "t001";
  r.mode = GenerationMode::kRephrase;
  r.round = 2;
  r.slot = 4;
  r.mode_index = 1;
  r.constraints = Golden("yahoo_rephrase");
  r.instruction = Verbalize(r.constraints, TaskKind::kClassification,
                            LabelPhrasing::Preset("topic"));
  r.generation = "Some generated text.";
  r.payload = std::string("Business & Finance");
  FaithfulnessVerdict v;
  v.lexical = {false, true, 0.75, 3, 4, false};
  v.length = {true, true, 16};
  v.concept_ok = false;
  v.violated_concepts = {"coaching"};
  v.syntactic_similarity = 0.5;
  r.verdict = v;
  r.accepted = true;
  const nlohmann::json j = r;
  EXPECT_EQ(j["id"], "t001#rephrase1#r2");
  const AugmentationRecord back = j.get<AugmentationRecord>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_EQ(back.verdict, r.verdict);
  EXPECT_EQ(back.payload, r.payload);

  AugmentationRecord rejected = r;
  rejected.payload.reset();
  rejected.verdict.reset();
  rejected.accepted = false;
  rejected.rejection_reason = "no_entity";
  EXPECT_EQ(nlohmann::json(nlohmann::json(rejected).get<AugmentationRecord>()),
            nlohmann::json(rejected));
}

TEST(RecordTest, AugmentedIdAndPolicies) {
  AugmentationRecord r;
  r.source_id = "q000";
  r.mode_index = 2;
  EXPECT_EQ(r.AugmentedId(), "q000#novel2#r0");
  for (AcceptPolicy p : {AcceptPolicy::kAll, AcceptPolicy::kStrict, AcceptPolicy::kRelaxed}) {
    EXPECT_EQ(ParseAcceptPolicy(AcceptPolicyName(p)), p);
    EXPECT_FALSE(Accept(r, p));  // no payload
  }
  EXPECT_THROW(ParseAcceptPolicy("some"), Error);

  r.payload = std::string("x");
  FaithfulnessVerdict v;
  v.lexical = {false, true, 0.8, 4, 5, false};
  v.length = {true, true, 10};
  r.verdict = v;
  EXPECT_TRUE(Accept(r, AcceptPolicy::kAll));
  EXPECT_FALSE(Accept(r, AcceptPolicy::kStrict));
  EXPECT_TRUE(Accept(r, AcceptPolicy::kRelaxed));
  r.verdict->length = {false, false, 40};
  EXPECT_FALSE(Accept(r, AcceptPolicy::kRelaxed));
}

}  // namespace
}  // namespace coda
