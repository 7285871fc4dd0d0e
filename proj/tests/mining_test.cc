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
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "coda/error.h"
#include "stats_util.h"
#include "test_util.h"

namespace coda {
namespace {

using ::coda::testing::ChiSquareUniformPValue;

Dataset Topics() {
  return LoadDataset(testing::SourcePath("tests/data/topics_100.jsonl"),
                     CorpusFormat::kJsonl, TaskKind::kClassification);
}

// 200 documents over four labels. Each label has private words; "common"
// words are shared by all labels.
Dataset SyntheticCorpus(uint64_t seed) {
  const std::map<std::string, std::vector<std::string>> words = {
      {"alpha", {"apple", "apricot", "avocado", "almond"}},
      {"beta", {"banana", "blueberry", "basil", "barley"}},
      {"gamma", {"grape", "guava", "ginger", "garlic"}},
      {"delta", {"date", "dill", "durian", "damson"}},
  };
  const std::vector<std::string> common = {"fresh", "market", "price", "season", "ripe"};
  std::mt19937 gen(static_cast<uint32_t>(seed));
  std::vector<Document> docs;
  size_t i = 0;
  for (const auto& [label, own] : words) {
    for (int j = 0; j < 50; ++j) {
      std::string text;
      const int len = 4 + static_cast<int>(gen() % 5);
      for (int w = 0; w < len; ++w) {
        const bool shared = gen() % 3 == 0;
        const auto& pool = shared ? common : own;
        text += (w ? " " : "") + pool[gen() % pool.size()];
      }
      char id[16];
      std::snprintf(id, sizeof(id), "s%03zu", i++);
      docs.push_back({id, text, label});
    }
  }
  return Dataset(TaskKind::kClassification, docs);
}

// Brute-force recomputation straight from the definition.
std::vector<PhraseLabelScore> OracleSpurious(const Dataset& ds, size_t min_support,
                                             size_t top_n) {
  std::vector<std::vector<std::string>> folded;
  std::set<std::string> candidates;
  for (const Document& d : ds.documents()) {
    const TokenSequence seq = Tokenize(d.text);
    folded.push_back(FoldedSurfaces(seq));
    for (size_t s = 0; s < seq.size(); ++s) {
      for (size_t n = 1; n <= 3 && s + n <= seq.size(); ++n) {
        bool ok = false;
        bool punct = false;
        std::string key;
        for (size_t t = s; t < s + n; ++t) {
          punct = punct || seq.tokens[t].punctuation;
          ok = ok || !IsStopword(folded.back()[t]);
          key += (t > s ? " " : "") + folded.back()[t];
        }
        if (ok && !punct) candidates.insert(key);
      }
    }
  }
  std::vector<PhraseLabelScore> out;
  const double total = static_cast<double>(ds.size());
  for (const std::string& label : ds.label_inventory()) {
    double label_docs = 0;
    for (const Document& d : ds.documents()) label_docs += d.label() == label;
    std::vector<PhraseLabelScore> scored;
    for (const std::string& phrase : candidates) {
      std::vector<std::string> needle;
      std::istringstream in(phrase);
      for (std::string w; in >> w;) needle.push_back(w);
      double df = 0;
      size_t support = 0;
      for (size_t i = 0; i < ds.size(); ++i) {
        bool found = false;
        for (size_t s = 0; !found && s + needle.size() <= folded[i].size(); ++s) {
          found = std::equal(needle.begin(), needle.end(), folded[i].begin() + s);
        }
        df += found;
        support += found && ds[i].label() == label;
      }
      if (support < min_support) continue;
      const double pmi = std::log((support / total) / ((df / total) * (label_docs / total)));
      if (pmi <= 0) continue;
      scored.push_back({phrase, label, pmi * std::log(1.0 + support), support});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.score != b.score ? a.score > b.score : a.phrase < b.phrase;
    });
    if (scored.size() > top_n) scored.resize(top_n);
    out.insert(out.end(), scored.begin(), scored.end());
  }
  return out;
}

void ExpectSamePhrases(const std::vector<PhraseLabelScore>& got,
                       const std::vector<PhraseLabelScore>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].phrase, want[i].phrase) << i;
    EXPECT_EQ(got[i].label, want[i].label) << i;
    EXPECT_EQ(got[i].support, want[i].support) << i;
    EXPECT_NEAR(got[i].score, want[i].score, 1e-9) << i;
  }
}

TEST(SpuriousPhrasesTest, MatchesBruteForceOnSyntheticCorpus) {
  const Dataset ds = SyntheticCorpus(1);
  ASSERT_EQ(ds.size(), 200u);
  const auto got = SpuriousPhrases(ds, 5, 10);
  EXPECT_FALSE(got.empty());
  ExpectSamePhrases(got, OracleSpurious(ds, 5, 10));
}

TEST(SpuriousPhrasesTest, MatchesBruteForceOnTopicFixture) {
  const Dataset ds = Topics();
  ExpectSamePhrases(SpuriousPhrases(ds, 3, 7), OracleSpurious(ds, 3, 7));
}

TEST(SpuriousPhrasesTest, ExclusivePhraseOutranksSharedOnes) {
  const Dataset ds = SyntheticCorpus(2);
  const auto got = SpuriousPhrases(ds, 5, 1000);
  for (const auto& p : got) {
    EXPECT_GE(p.support, 5u);
    EXPECT_TRUE(std::isfinite(p.score));
    EXPECT_GT(p.score, 0.0);
  }
  // Words spread over every label have PMI near zero and stay out of the
  // top ranks.
  const std::set<std::string> shared = {"fresh", "market", "price", "season", "ripe"};
  for (const auto& p : got) {
    if (shared.count(p.phrase)) EXPECT_LT(p.score / std::log1p(p.support), 0.3) << p.phrase;
  }
  for (const auto& p : SpuriousPhrases(ds, 5, 4)) EXPECT_FALSE(shared.count(p.phrase));
  const auto alpha = std::find_if(got.begin(), got.end(),
                                  [](const auto& p) { return p.phrase == "apple"; });
  ASSERT_NE(alpha, got.end());
  EXPECT_EQ(alpha->label, "alpha");
  EXPECT_NEAR(alpha->score, std::log(4.0) * std::log1p(alpha->support), 1e-12);
}

TEST(SpuriousPhrasesTest, PermutationInvariantAndBounded) {
  const Dataset ds = SyntheticCorpus(3);
  std::vector<Document> docs(ds.documents().begin(), ds.documents().end());
  std::reverse(docs.begin(), docs.end());
  std::mt19937 gen(5);
  std::shuffle(docs.begin(), docs.end(), gen);
  const auto a = SpuriousPhrases(ds, 5, 4);
  const auto b = SpuriousPhrases(Dataset(TaskKind::kClassification, docs), 5, 4);
  ExpectSamePhrases(a, b);
  std::map<std::string, size_t> per_label;
  for (const auto& p : a) ++per_label[p.label];
  for (const auto& [label, n] : per_label) EXPECT_LE(n, 4u);
  EXPECT_TRUE(SpuriousPhrases(ds, 1000, 10).empty());
}

TEST(SpuriousPhrasesTest, OtherTasksYieldNothing) {
  const Dataset ner = LoadDataset(testing::SourcePath("tests/data/ner_sample.conll"),
                                  CorpusFormat::kConll, TaskKind::kNer);
  EXPECT_TRUE(SpuriousPhrases(ner, 1, 10).empty());
}

TEST(ParseConceptReplyTest, Rules) {
  EXPECT_EQ(ParseConceptReply("rating in movie reviews"), "rating in movie reviews");
  EXPECT_EQ(ParseConceptReply("\n  \"Rating in movie reviews.\"  \nMore text."),
            "Rating in movie reviews");
  EXPECT_EQ(ParseConceptReply("One two three four five six seven eight nine ten. "
                              "Second sentence.\nThird line.\nFourth.\nFifth."),
            "One two three four five six seven eight");
  for (const std::string reply : {"", "   \n\n ", "\"\""}) {
    try {
      ParseConceptReply(reply);
      FAIL() << "parsed '" << reply << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConceptParseError);
    }
  }
}

class ScriptedBackend : public GenerationBackend {
 public:
  explicit ScriptedBackend(std::function<std::string(const std::string&)> fn)
      : fn_(std::move(fn)) {}
  GenerationResponse Generate(const GenerationRequest& r) override {
    prompts.push_back(r.prompt);
    return {fn_(r.prompt), id()};
  }
  std::string id() const override { return "scripted"; }
  std::vector<std::string> prompts;

 private:
  std::function<std::string(const std::string&)> fn_;
};

TEST(AbstractConceptsTest, NegativeLabelGetsConcept) {
  const Dataset ds(TaskKind::kClassification,
                   {{"r1", "One star. Awful plot.", "negative"},
                    {"r2", "Great fun.", "positive"}});
  const std::vector<PhraseLabelScore> phrases = {{"one star", "negative", 1.0, 1}};
  ScriptedBackend backend([](const std::string&) { return "rating in movie reviews"; });
  const ConceptTable table = AbstractConcepts(phrases, ds, backend, {});
  ASSERT_EQ(table.For("negative").size(), 1u);
  EXPECT_EQ(table.For("negative")[0], "rating in movie reviews");
  EXPECT_TRUE(table.For("positive").empty());
  ASSERT_EQ(backend.prompts.size(), 1u);
  EXPECT_EQ(backend.prompts[0],
            "These phrases appear in documents labeled negative: one star. Example "
            "sentences: \"One star.\". Return a short abstract concept (at most 8 "
            "words) that these phrases describe.");
}

TEST(AbstractConceptsTest, KeepsThreeDistinctAndSkipsUnparseable) {
  const Dataset ds = Topics();
  std::vector<PhraseLabelScore> phrases;
  for (int i = 0; i < 8; ++i) phrases.push_back({"p" + std::to_string(i), "Sports", 1.0, 5});
  int call = 0;
  ScriptedBackend backend([&call](const std::string&) {
    const std::vector<std::string> replies = {"", "team play", "Team play", "games\nx",
                                              "fitness", "extra"};
    return replies[std::min<size_t>(call++, replies.size() - 1)];
  });
  const ConceptTable table = AbstractConcepts(phrases, ds, backend, {});
  EXPECT_EQ(std::vector<std::string>(table.For("Sports").begin(), table.For("Sports").end()),
            (std::vector<std::string>{"team play", "games", "fitness"}));
  EXPECT_EQ(backend.prompts.size(), 5u);
  for (const auto& [label, concepts] : table.by_label) {
    EXPECT_LE(concepts.size(), kMaxConceptsPerLabel);
    for (const auto& c : concepts) EXPECT_EQ(c.find('\n'), std::string::npos);
  }
}

TEST(ExampleSentencesTest, TokenBoundaryMatchesInOrder) {
  const Dataset ds(TaskKind::kClassification,
                   {{"a", "Stars shine. No star here? A star is born.", "x"},
                    {"b", "One star.", "y"},
                    {"c", "Star one. Star two.", "x"}});
  EXPECT_EQ(ExampleSentences(ds, "x", "star"),
            (std::vector<std::string>{"No star here?", "A star is born.", "Star one."}));
  EXPECT_TRUE(ExampleSentences(ds, "x", "sta").empty());
}

std::vector<std::string> TextsOf(const Dataset& ds) {
  std::vector<std::string> out;
  for (const Document& d : ds.documents()) out.push_back(d.text);
  return out;
}

TEST(SimilarityIndexTest, DuplicateTextsAreIdentical) {
  const Dataset ds(TaskKind::kClassification,
                   {{"a", "same words here", "x"}, {"b", "same words here", "x"},
                    {"c", "something else", "y"}});
  const SimilarityIndex index(ds, HashedTfidfEmbedder(TextsOf(ds)));
  EXPECT_NEAR(index.Similarity(0, 1), 1.0, 1e-12);
  const auto n = index.Neighbors(2);
  EXPECT_EQ(n.size(), 2u);
  EXPECT_EQ(std::count(n.begin(), n.end(), 2u), 0);
}

TEST(SimilarityIndexTest, RankingMatchesAllPairsBruteForce) {
  const Dataset full = Topics();
  const Dataset ds = SampleLowResource(full, 20, 9);
  const HashedTfidfEmbedder embedder(TextsOf(ds));
  const SimilarityIndex index(ds, embedder);
  const auto vectors = embedder.Embed(TextsOf(ds));
  for (size_t q = 0; q < ds.size(); ++q) {
    std::vector<std::pair<double, size_t>> all;
    for (size_t j = 0; j < ds.size(); ++j) {
      if (j == q) continue;
      double dot = 0, a = 0, b = 0;
      for (size_t t = 0; t < vectors[q].size(); ++t) {
        dot += vectors[q][t] * vectors[j][t];
        a += vectors[q][t] * vectors[q][t];
        b += vectors[j][t] * vectors[j][t];
      }
      all.emplace_back(-dot / std::sqrt(a * b), j);
    }
    std::sort(all.begin(), all.end());
    const auto got = index.Neighbors(q);
    ASSERT_EQ(got.size(), all.size());
    for (size_t r = 0; r < got.size(); ++r) {
      // Near-equal scores may legitimately swap.
      EXPECT_NEAR(index.Similarity(q, got[r]), -all[r].first, 1e-12);
    }
  }
}

TEST(SamplePartnerTest, ThreeDocumentsWithKOne) {
  const Dataset ds(TaskKind::kClassification,
                   {{"a", "red apple pie", "x"}, {"b", "red apple tart", "x"},
                    {"c", "blue ocean wave", "y"}});
  const SimilarityIndex index(ds, HashedTfidfEmbedder(TextsOf(ds)));
  const auto pool = PartnerPool(index, 0, 1);
  EXPECT_EQ(pool, (std::vector<size_t>{1, 2}));
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const size_t partner = SamplePartner(index, 0, 1, rng);
    EXPECT_TRUE(partner == 1 || partner == 2);
  }
}

TEST(SamplePartnerTest, DeterministicAndNeverSelf) {
  const Dataset ds = Topics();
  const SimilarityIndex index(ds, HashedTfidfEmbedder(TextsOf(ds)));
  for (size_t q = 0; q < ds.size(); q += 7) {
    Rng a(q), b(q);
    const size_t first = SamplePartner(index, q, 5, a);
    EXPECT_EQ(first, SamplePartner(index, q, 5, b));
    EXPECT_NE(first, q);
    const auto pool = PartnerPool(index, q, 5);
    EXPECT_EQ(std::set<size_t>(pool.begin(), pool.end()).size(), 10u);
    EXPECT_EQ(std::count(pool.begin(), pool.end(), q), 0);
  }
}

TEST(SamplePartnerTest, InsufficientData) {
  const Dataset ds(TaskKind::kClassification,
                   {{"a", "one", "x"}, {"b", "two", "x"}, {"c", "three", "y"},
                    {"d", "four", "y"}});
  const SimilarityIndex index(ds, HashedTfidfEmbedder());
  Rng rng(1);
  try {
    SamplePartner(index, 0, 2, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(SamplePartnerTest, DrawsAreUniformOverPool) {
  const Dataset ds = Topics();
  const SimilarityIndex index(ds, HashedTfidfEmbedder(TextsOf(ds)));
  const auto pool = PartnerPool(index, 4, 5);
  std::map<size_t, size_t> slot;
  for (size_t i = 0; i < pool.size(); ++i) slot[pool[i]] = i;
  std::vector<size_t> counts(pool.size(), 0);
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(DeriveSeed(seed, "partner"));
    ++counts[slot.at(SamplePartner(index, 4, 5, rng))];
  }
  EXPECT_GT(ChiSquareUniformPValue(counts), 0.01);
}

TEST(ChiSquareTest, KnownQuantiles) {
  // Upper 5% point of chi-square with 9 degrees of freedom is 16.919.
  EXPECT_NEAR(testing::UpperGammaQ(4.5, 16.919 / 2), 0.05, 1e-4);
  // With 1 degree of freedom, 3.841 is the 5% point.
  EXPECT_NEAR(testing::UpperGammaQ(0.5, 3.841 / 2), 0.05, 1e-4);
  const std::vector<size_t> skewed = {2000, 0, 0, 0};
  EXPECT_LT(ChiSquareUniformPValue(skewed), 1e-10);
}

TEST(AbstractDescriptionTest, MockEchoAndEmptyReply) {
  MockBackend mock;
  const Document doc{"t1", "Shops in most malls advertise for Christmas help up to the last "
                           "minute.", std::string("Business & Finance")};
  EXPECT_EQ(AbstractDescription(doc, mock, {}),
            "Shops in most malls advertise for Christmas help up to");
  ScriptedBackend blank([](const std::string&) { return " \n "; });
  try {
    AbstractDescription(doc, blank, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyReply);
  }
}

TEST(AnalysisArtifactTest, JsonRoundTrip) {
  AnalysisArtifact artifact;
  artifact.concepts.by_label["Sports"] = {"team play", "fitness"};
  artifact.spurious = {{"goal", "Sports", 1.5, 7}};
  artifact.length_stats = {12.5, 3.25};
  const nlohmann::json j = AnalysisToJson(artifact);
  EXPECT_TRUE(j.contains("concepts") && j.contains("spurious") && j.contains("length_stats"));
  const AnalysisArtifact back = AnalysisFromJson(j);
  EXPECT_EQ(back.concepts.by_label, artifact.concepts.by_label);
  ASSERT_EQ(back.spurious.size(), 1u);
  EXPECT_EQ(back.spurious[0].phrase, "goal");
  EXPECT_EQ(back.spurious[0].support, 7u);
  EXPECT_DOUBLE_EQ(back.length_stats.sd, 3.25);
  EXPECT_THROW(AnalysisFromJson(nlohmann::json::object()), Error);
}

}  // namespace
}  // namespace coda
