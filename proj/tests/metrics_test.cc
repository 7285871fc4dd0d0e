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

#include "coda/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "coda/error.h"
#include "coda/textkit.h"
#include "fake_server.h"
#include "oracles.h"
#include "test_util.h"

namespace coda {
namespace {

std::vector<std::string> FixtureSentences() {
  const Dataset ds = LoadDataset(testing::SourcePath("tests/data/topics_100.jsonl"),
                                 CorpusFormat::kJsonl, TaskKind::kClassification);
  std::vector<std::string> out;
  for (const Document& d : ds.documents()) {
    for (std::string& s : SentenceTexts(d.text)) out.push_back(std::move(s));
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(PerplexityTest, UniformScorerGivesVocabularySize) {
  for (size_t v : {2u, 17u, 5000u}) {
    const UniformScorer scorer(v);
    const std::vector<std::string> texts = {"any text at all", "x", "Two. Sentences here!"};
    EXPECT_EQ(Perplexity(texts, scorer), static_cast<double>(v));
  }
}

TEST(PerplexityTest, RepeatingTheCorpusChangesNothing) {
  const auto sentences = FixtureSentences();
  const std::vector<std::string> train(sentences.begin(), sentences.begin() + 60);
  const TrigramScorer scorer(train);
  const std::vector<std::string> once = {sentences[70], sentences[71]};
  const std::vector<std::string> twice = {sentences[70], sentences[71], sentences[70],
                                          sentences[71]};
  EXPECT_NEAR(Perplexity(once, scorer), Perplexity(twice, scorer), 1e-9);
  const std::vector<std::string> single = {sentences[70]};
  const std::vector<std::string> doubled = {sentences[70], sentences[70]};
  EXPECT_NEAR(Perplexity(single, scorer), Perplexity(doubled, scorer), 1e-9);
}

TEST(PerplexityTest, NoTokensIsInsufficientData) {
  const UniformScorer scorer(10);
  EXPECT_EQ(CodeOf([&] { Perplexity({}, scorer); }), ErrorCode::kInsufficientData);
}

// Independent trigram model: count from padded folded word sequences, then
// sum log-probabilities directly.
TEST(TrigramScorerTest, MatchesCountOracle) {
  const auto sentences = FixtureSentences();
  ASSERT_GE(sentences.size(), 100u);
  const std::vector<std::string> train(sentences.begin(), sentences.begin() + 50);
  const TrigramScorer scorer(train);
  std::vector<std::string> test(sentences.begin() + 40, sentences.begin() + 100);
  test.push_back("Completely unseen vocabulary appears here.");
  const auto scores = scorer.Score(test);
  ASSERT_EQ(scores.size(), test.size());
  double total_lp = 0;
  size_t total_tokens = 0;
  for (size_t i = 0; i < test.size(); ++i) {
    size_t tokens = 0;
    const double lp = testing::OracleLogProb(train, test[i], TrigramScorer::kDefaultAlpha, &tokens);
    EXPECT_NEAR(scores[i].log_prob, lp, 1e-6) << test[i];
    EXPECT_EQ(scores[i].token_count, tokens);
    total_lp += lp;
    total_tokens += tokens;
  }
  EXPECT_NEAR(Perplexity(test, scorer), std::exp(-total_lp / total_tokens), 1e-6);
}

TEST(TrigramScorerTest, SmallModelByHand) {
  const std::vector<std::string> train = {"a b c", "a b d", "b c a"};
  const TrigramScorer scorer(train);
  // Types a, b, c, d plus </s> and <unk>.
  EXPECT_EQ(scorer.vocabulary_size(), 6u);
  EXPECT_EQ(scorer.ScoredTokens("A zzz"), (std::vector<std::string>{"a", "<unk>", "</s>"}));
  // "a b" = P(a | <s> <s>) P(b | <s> a) P(</s> | a b).
  const double want = std::log((2 + 0.1) / (3 + 0.6)) + std::log((2 + 0.1) / (2 + 0.6)) +
                      std::log((0 + 0.1) / (2 + 0.6));
  const std::vector<std::string> ab = {"a b"};
  EXPECT_NEAR(scorer.Score(ab)[0].log_prob, want, 1e-12);
  EXPECT_EQ(scorer.Score(ab)[0].token_count, 3u);
  // The smoothed distribution after (<s>, a) sums to one over V.
  double mass = 0;
  for (const std::string w : {"a", "b", "c", "d", "</s>", "<unk>"}) {
    const std::vector<std::string> one = {"a " + w};
    size_t t = 0;
    EXPECT_NEAR(scorer.Score(one)[0].log_prob, testing::OracleLogProb(train, "a " + w, 0.1, &t), 1e-9);
    mass += ((w == "b" ? 2.0 : 0.0) + 0.1) / (2.0 + 0.1 * 6);
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(TrigramScorerTest, InDomainBeatsDisjointTraining) {
  const auto sentences = FixtureSentences();
  const std::vector<std::string> corpus(sentences.begin(), sentences.begin() + 50);
  const std::vector<std::string> disjoint = {
      "Quantum chromodynamics describes gluons binding quarks.",
      "Medieval monks copied manuscripts by candlelight.",
      "Volcanic ash drifted across northern glaciers overnight."};
  const TrigramScorer same(corpus);
  const TrigramScorer other(disjoint);
  EXPECT_LT(Perplexity(corpus, same), Perplexity(corpus, other));
}

std::vector<AugmentationGroup> FixtureGroups(size_t sources, size_t r, uint64_t seed) {
  const auto sentences = FixtureSentences();
  std::mt19937 gen(static_cast<uint32_t>(seed));
  std::vector<AugmentationGroup> groups;
  for (size_t i = 0; i < sources; ++i) {
    AugmentationGroup g{sentences[gen() % sentences.size()], {}};
    for (size_t j = 0; j < r; ++j) g.augmentations.push_back(sentences[gen() % sentences.size()]);
    groups.push_back(g);
  }
  return groups;
}

TEST(DiversityTest, ClosedForms) {
  const std::vector<AugmentationGroup> same = {{"a b", {"a b", "B a."}}};
  EXPECT_DOUBLE_EQ(Diversity(same), 0.0);
  const std::vector<AugmentationGroup> two = {{"a b", {"a c", "b d"}}};
  EXPECT_DOUBLE_EQ(Diversity(two), 2.0);
  const std::vector<AugmentationGroup> ragged = {{"a", {"b"}}, {"a", {"b", "c"}}};
  EXPECT_EQ(CodeOf([&] { Diversity(ragged); }), ErrorCode::kGroupSizeMismatch);
  EXPECT_EQ(CodeOf([&] { LengthDiversity(ragged); }), ErrorCode::kGroupSizeMismatch);
}

TEST(DiversityTest, MatchesSetOracleAndInvariants) {
  auto groups = FixtureGroups(20, 5, 3);
  const double d = Diversity(groups);
  EXPECT_NEAR(d, testing::OracleDiversity(groups), 1e-12);
  std::set<std::string> all_types;
  for (const auto& g : groups) {
    for (const auto& a : g.augmentations) {
      for (const auto& w : FoldedWords(a)) all_types.insert(w);
    }
  }
  EXPECT_LE(d, static_cast<double>(all_types.size()));
  std::mt19937 gen(9);
  for (auto& g : groups) std::shuffle(g.augmentations.begin(), g.augmentations.end(), gen);
  std::shuffle(groups.begin(), groups.end(), gen);
  EXPECT_NEAR(Diversity(groups), d, 1e-12);
}

TEST(LengthDiversityTest, ClosedFormsAndOracle) {
  const std::vector<AugmentationGroup> equal = {{"one two three", {"a b c", "d e f."}}};
  EXPECT_DOUBLE_EQ(LengthDiversity(equal), 0.0);
  const std::vector<AugmentationGroup> example = {
      {"w1 w2 w3 w4 w5 w6 w7 w8 w9 w10",
       {"w1 w2 w3 w4 w5 w6 w7 w8", "w1 w2 w3 w4 w5 w6 w7 w8 w9 w10 w11 w12 w13 w14"}}};
  EXPECT_DOUBLE_EQ(LengthDiversity(example), 3.0);

  auto groups = FixtureGroups(20, 3, 4);
  double sum = 0;
  size_t pairs = 0;
  for (const auto& g : groups) {
    for (const auto& a : g.augmentations) {
      sum += std::fabs(static_cast<double>(FoldedWords(a).size()) -
                       static_cast<double>(FoldedWords(g.source_text).size()));
      ++pairs;
    }
  }
  const double ld = LengthDiversity(groups);
  EXPECT_NEAR(ld, sum / pairs, 1e-12);
  std::reverse(groups.begin(), groups.end());
  EXPECT_NEAR(LengthDiversity(groups), ld, 1e-12);
}

TEST(HttpScorerTest, ReadsScoresAndMapsFailures) {
  testing::FakeServer server;
  server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    const size_t n = body["texts"].size();
    if (n == 3) {
      res.status = 500;
      return;
    }
    nlohmann::json lp = nlohmann::json::array(), tc = nlohmann::json::array();
    for (size_t i = 0; i < n; ++i) {
      lp.push_back(-2.0 * (i + 1));
      tc.push_back(i + 1);
    }
    if (n == 4) tc.erase(tc.begin());
    res.set_content(nlohmann::json{{"logprobs", lp}, {"token_counts", tc}}.dump(),
                    "application/json");
  });
  server.Start();
  const HttpScorer scorer(server.url(), HttpOptions{});
  const std::vector<std::string> two = {"a", "b"};
  const auto scores = scorer.Score(two);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_DOUBLE_EQ(scores[1].log_prob, -4.0);
  EXPECT_EQ(scores[1].token_count, 2u);
  EXPECT_NEAR(Perplexity(two, scorer), std::exp(6.0 / 3.0), 1e-12);
  const std::vector<std::string> three = {"a", "b", "c"};
  EXPECT_EQ(CodeOf([&] { scorer.Score(three); }), ErrorCode::kScorerUnavailable);
  const std::vector<std::string> four = {"a", "b", "c", "d"};
  EXPECT_EQ(CodeOf([&] { scorer.Score(four); }), ErrorCode::kScorerUnavailable);
  const HttpScorer dead("http://127.0.0.1:1", HttpOptions{});
  EXPECT_EQ(CodeOf([&] { dead.Score(two); }), ErrorCode::kScorerUnavailable);
}

TEST(QualityReportTest, Json) {
  const QualityReport report{22.5, 7.25, 4.0, 5, 100};
  const nlohmann::json j = report.ToJson();
  EXPECT_DOUBLE_EQ(j["perplexity"].get<double>(), 22.5);
  EXPECT_DOUBLE_EQ(j["diversity"].get<double>(), 7.25);
  EXPECT_DOUBLE_EQ(j["length_diversity"].get<double>(), 4.0);
}

}  // namespace
}  // namespace coda
