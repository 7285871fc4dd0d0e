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

#include "coda/corpus.h"

#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "coda/error.h"
#include "coda/record.h"
#include "test_util.h"

namespace coda {
namespace {

using ::coda::testing::SourcePath;

Dataset ReadString(const std::string& text, CorpusFormat format, TaskKind task) {
  std::istringstream in(text);
  return ReadDataset(in, format, task);
}

std::string WriteString(const Dataset& ds, CorpusFormat format) {
  std::ostringstream out;
  WriteDataset(ds, format, out);
  return out.str();
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kIoError;
}

TEST(CorpusTest, ReadsTwoLineJsonl) {
  const Dataset ds = ReadString(
      "{\"text\": \"Stocks fell.\", \"label\": \"Business\"}\n"
      "{\"id\": \"x\", \"text\": \"Team won.\", \"label\": \"Sports\"}\n",
      CorpusFormat::kJsonl, TaskKind::kClassification);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].id, "doc0");
  EXPECT_EQ(ds[1].id, "x");
  EXPECT_EQ(ds[0].label(), "Business");
  EXPECT_EQ(ds.label_inventory(), (std::set<std::string>{"Business", "Sports"}));
}

TEST(CorpusTest, JsonlRejectsMissingLabel) {
  EXPECT_EQ(CodeOf([] {
              ReadString("{\"text\": \"no label\"}\n", CorpusFormat::kJsonl,
                         TaskKind::kClassification);
            }),
            ErrorCode::kParseError);
}

TEST(CorpusTest, JsonlRejectsDuplicateIds) {
  EXPECT_EQ(CodeOf([] {
              ReadString("{\"id\":\"a\",\"text\":\"x\",\"label\":\"L\"}\n"
                         "{\"id\":\"a\",\"text\":\"y\",\"label\":\"L\"}\n",
                         CorpusFormat::kJsonl, TaskKind::kClassification);
            }),
            ErrorCode::kDuplicateId);
}

TEST(CorpusTest, EmptyInputIsAnError) {
  EXPECT_EQ(CodeOf([] {
              ReadString("", CorpusFormat::kJsonl, TaskKind::kClassification);
            }),
            ErrorCode::kParseError);
}

TEST(CorpusTest, FormatTaskMismatch) {
  EXPECT_EQ(CodeOf([] {
              ReadString("Israel B-LOC\n", CorpusFormat::kConll,
                         TaskKind::kClassification);
            }),
            ErrorCode::kTaskMismatch);
}

TEST(CorpusTest, ConllBuildsEntitySpans) {
  const Dataset ds = ReadString(
      "-DOCSTART- -X- -X- O\n\n"
      "Israel NNP B-NP B-LOC\napproves VBZ B-VP O\nArafat NNP B-NP B-PER\n"
      "'s POS B-NP O\nflight NN I-NP O\nto TO B-PP O\nWest NNP B-NP B-LOC\n"
      "Bank NNP I-NP I-LOC\n. . O O\n",
      CorpusFormat::kConll, TaskKind::kNer);
  ASSERT_EQ(ds.size(), 1u);
  const NerPayload& ner = ds[0].ner();
  ASSERT_EQ(ner.tokens.size(), 9u);
  ASSERT_EQ(ner.spans.size(), 3u);
  EXPECT_EQ(ner.spans[0], (EntitySpan{0, 1, "LOC"}));
  EXPECT_EQ(ner.spans[1], (EntitySpan{2, 3, "PER"}));
  EXPECT_EQ(ner.spans[2], (EntitySpan{6, 8, "LOC"}));
  EXPECT_EQ(ds[0].text, "Israel approves Arafat 's flight to West Bank .");
}

TEST(CorpusTest, ConllRejectsDanglingInside) {
  EXPECT_EQ(CodeOf([] {
              ReadString("Bank I-LOC\n", CorpusFormat::kConll, TaskKind::kNer);
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ReadString("West B-LOC\nBank I-PER\n", CorpusFormat::kConll,
                         TaskKind::kNer);
            }),
            ErrorCode::kParseError);
}

TEST(CorpusTest, SquadRejectsMisplacedAnswer) {
  const std::string bad = R"({"data": [{"title": "T", "paragraphs": [{
      "context": "Paris is in France.",
      "qas": [{"id": "q", "question": "Where?",
               "answers": [{"text": "France", "answer_start": 3}]}]}]}]})";
  EXPECT_EQ(CodeOf([&] { ReadString(bad, CorpusFormat::kSquad, TaskKind::kQa); }),
            ErrorCode::kParseError);
}

TEST(CorpusTest, SquadOffsetsAreCodePoints) {
  const Dataset ds = LoadDataset(SourcePath("tests/data/squad_sample.json"),
                                 CorpusFormat::kSquad, TaskKind::kQa);
  for (const Document& doc : ds.documents()) {
    const QaPayload& qa = doc.qa();
    EXPECT_EQ(doc.text.substr(qa.answer_start, qa.answer.size()), qa.answer);
  }
  // "Beyoncé" carries a two-byte character before the answers.
  const Document& first = ds[0];
  EXPECT_EQ(first.qa().answer, "June 24, 2003");
  EXPECT_EQ(ByteToCodePointOffset(first.text, first.qa().answer_start) + 1,
            first.qa().answer_start);
}

TEST(CorpusTest, CodePointConversionRoundTrips) {
  const std::string text = "a\xC3\xA9z\xE2\x82\xAC!";
  for (size_t cp = 0; cp <= 5; ++cp) {
    const auto bytes = CodePointToByteOffset(text, cp);
    ASSERT_TRUE(bytes.has_value());
    EXPECT_EQ(ByteToCodePointOffset(text, *bytes), cp);
  }
  EXPECT_FALSE(CodePointToByteOffset(text, 6).has_value());
}

// Semantic identity: same ids, text, payload, inventory.
void ExpectRoundTrip(const std::string& file, CorpusFormat format, TaskKind task) {
  const Dataset first = LoadDataset(SourcePath(file), format, task);
  const std::string written = WriteString(first, format);
  const Dataset second = ReadString(written, format, task);
  ASSERT_EQ(first.size(), second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i], second[i]) << file << " document " << i;
  }
  EXPECT_EQ(first.label_inventory(), second.label_inventory());
  EXPECT_EQ(WriteString(second, format), written);
}

TEST(CorpusTest, RoundTripJsonl) {
  ExpectRoundTrip("tests/data/topics_100.jsonl", CorpusFormat::kJsonl,
                  TaskKind::kClassification);
}

TEST(CorpusTest, RoundTripConll) {
  ExpectRoundTrip("tests/data/ner_sample.conll", CorpusFormat::kConll, TaskKind::kNer);
}

TEST(CorpusTest, RoundTripSquad) {
  ExpectRoundTrip("tests/data/squad_sample.json", CorpusFormat::kSquad, TaskKind::kQa);
}

Dataset Topics() {
  return LoadDataset(SourcePath("tests/data/topics_100.jsonl"), CorpusFormat::kJsonl,
                     TaskKind::kClassification);
}

TEST(CorpusTest, SampleFullSizeIsIdentity) {
  const Dataset ds = Topics();
  const Dataset same = SampleLowResource(ds, ds.size(), 99);
  ASSERT_EQ(same.size(), ds.size());
  for (size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(same[i], ds[i]);
}

TEST(CorpusTest, SampleIsDeterministicSubsetInOrder) {
  const Dataset ds = Topics();
  const Dataset a = SampleLowResource(ds, 30, 1);
  const Dataset b = SampleLowResource(ds, 30, 1);
  EXPECT_EQ(WriteString(a, CorpusFormat::kJsonl), WriteString(b, CorpusFormat::kJsonl));
  ASSERT_EQ(a.size(), 30u);
  size_t last = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto at = ds.Find(a[i].id);
    ASSERT_TRUE(at.has_value());
    EXPECT_EQ(ds[*at], a[i]);
    if (i > 0) EXPECT_GT(*at, last);
    last = *at;
  }
}

TEST(CorpusTest, StratifiedSampleCoversEveryLabel) {
  const Dataset ds = Topics();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const Dataset s = SampleLowResource(ds, 5, seed);
    std::map<std::string, int> counts;
    for (const Document& d : s.documents()) ++counts[d.label()];
    EXPECT_EQ(counts.size(), 5u) << "seed " << seed;
  }
}

TEST(CorpusTest, SampleTooLarge) {
  const Dataset ds = Topics();
  EXPECT_EQ(CodeOf([&] { SampleLowResource(ds, 101, 0); }),
            ErrorCode::kInsufficientData);
}

AugmentationRecord Accepted(const std::string& source, size_t index, Payload payload) {
  AugmentationRecord r;
  r.source_id = source;
  r.mode_index = index;
  r.generation = "generated text " + std::to_string(index);
  r.payload = std::move(payload);
  r.accepted = true;
  return r;
}

TEST(CorpusTest, MergeAppendsAcceptedRecords) {
  const Dataset ds = Topics();
  std::vector<AugmentationRecord> records;
  for (size_t i = 0; i < 3; ++i) records.push_back(Accepted("t000", i, ds[0].label()));
  records[1].accepted = false;
  const Dataset merged = MergeAugmentations(ds, records);
  ASSERT_EQ(merged.size(), ds.size() + 2);
  EXPECT_EQ(merged[100].id, "t000#novel0#r0");
  EXPECT_EQ(merged[101].id, "t000#novel2#r0");
  EXPECT_EQ(merged[101].label(), ds[0].label());
}

TEST(CorpusTest, MergeTwiceCollides) {
  const Dataset ds = Topics();
  const std::vector<AugmentationRecord> records = {Accepted("t000", 0, ds[0].label())};
  const Dataset once = MergeAugmentations(ds, records);
  EXPECT_EQ(CodeOf([&] { MergeAugmentations(once, records); }),
            ErrorCode::kDuplicateId);
}

TEST(CorpusTest, MergeRequiresPayload) {
  const Dataset ds = Topics();
  AugmentationRecord r = Accepted("t000", 0, ds[0].label());
  r.payload.reset();
  const std::vector<AugmentationRecord> records = {r};
  EXPECT_EQ(CodeOf([&] { MergeAugmentations(ds, records); }),
            ErrorCode::kPayloadInvalid);
}

}  // namespace
}  // namespace coda
