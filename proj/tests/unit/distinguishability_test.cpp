// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "attrib/attrib.hpp"
#include "test_util.hpp"

using namespace attrib;

namespace {

ModelCluster line_cluster(std::string model, std::vector<float> xs) {
  std::vector<Embedding> es;
  for (const float x : xs) es.push_back({x});
  return make_cluster("p", std::move(model), std::move(es));
}

}  // namespace

TEST(NnPurity, TightSeparatedClustersArePure) {
  std::vector<ModelCluster> cs{make_cluster("p", "a", {{0, 0}, {0, 0}, {0, 0}}),
                               make_cluster("p", "b", {{9, 9}, {9, 9}, {9, 9}})};
  const auto f = nn_purity(cs);
  EXPECT_EQ(f.at("a"), 1.0);
  EXPECT_EQ(f.at("b"), 1.0);
}

TEST(NnPurity, InterleavedLineWithTies) {
  std::vector<ModelCluster> cs{line_cluster("A", {0.0f, 1.0f, 2.0f}), line_cluster("B", {0.5f, 1.5f, 10.0f})};
  const auto f = nn_purity(cs);
  EXPECT_EQ(f.at("A"), 0.0);
  EXPECT_EQ(f.at("B"), 0.0);
}

TEST(NnPurity, TranslationSeparatesInterleavedLine) {
  std::vector<ModelCluster> cs{line_cluster("A", {0.0f, 1.0f, 2.0f}), line_cluster("B", {100.5f, 101.5f, 110.0f})};
  const auto f = nn_purity(cs);
  EXPECT_EQ(f.at("A"), 1.0);
  EXPECT_EQ(f.at("B"), 1.0);
}

TEST(NnPurity, TieWithIntraModelPointCountsAsHit) {
  // Point 0 of A is equidistant from A's 2 and B's -2.
  std::vector<ModelCluster> cs{line_cluster("A", {0.0f, 2.0f}), line_cluster("B", {-2.0f, -10.0f})};
  const auto f = nn_purity(cs);
  EXPECT_EQ(f.at("A"), 1.0);  // 0 -> {2 (A), -2 (B)} tie is a hit; 2 -> 0 (A)
  EXPECT_EQ(f.at("B"), 0.5);  // -2 -> 0 (A) misses; -10 -> -2 (B) hits
}

TEST(NnPurity, Preconditions) {
  EXPECT_THROW(nn_purity(std::vector<ModelCluster>{line_cluster("A", {0, 1})}), std::invalid_argument);
  std::vector<ModelCluster> bad{make_cluster("p", "a", {{0, 0}}), make_cluster("p", "b", {{1, 1, 1}})};
  EXPECT_THROW(nn_purity(bad), DataError);
}

TEST(Distinguishability, ScoreBounds) {
  std::vector<ModelCluster> pure{make_cluster("p", "a", {{0, 0}, {0, 0}}), make_cluster("p", "b", {{5, 5}, {5, 5}})};
  for (const double tau : {0.01, 0.5, 0.99}) {
    EXPECT_EQ(prompt_distinguishability(pure, tau).score, 1.0);
  }
  std::vector<ModelCluster> mixed{line_cluster("A", {0.0f, 1.0f, 2.0f}), line_cluster("B", {0.5f, 1.5f, 10.0f})};
  EXPECT_EQ(prompt_distinguishability(mixed, 0.5).score, 0.0);
}

TEST(Distinguishability, NineteenModelsFourSeparable) {
  std::vector<ModelCluster> cs;
  // Four tight clusters far apart; fifteen single-line models interleaved
  // pairwise so their points always have a foreign nearest neighbour.
  for (int m = 0; m < 4; ++m) {
    cs.push_back(make_cluster("p", "s" + std::to_string(m), {{1000.0f * (m + 1), 0}, {1000.0f * (m + 1), 0}}));
  }
  for (int m = 0; m < 15; ++m) {
    const float x = static_cast<float>(m);
    cs.push_back(make_cluster("p", "u" + std::to_string(100 + m), {{x, 0}, {x + 15.0f, 0}}));
  }
  // Points u_m at x and x+15: nearest neighbour at distance 1 is another model.
  const auto r = prompt_distinguishability(cs, 0.5);
  EXPECT_EQ(r.separable_count, 4u);
  EXPECT_EQ(r.model_count, 19u);
  EXPECT_EQ(r.score, 4.0 / 19.0);
  EXPECT_NEAR(r.score, 0.21, 0.005);
}

TEST(Distinguishability, StrictThresholdAndRange) {
  // frac(A) = 0.5 exactly: not separable at tau 0.5.
  std::vector<ModelCluster> cs{line_cluster("A", {0.0f, 0.1f, 5.0f, 20.0f}), line_cluster("B", {5.2f, 19.9f})};
  const auto f = nn_purity(cs);
  ASSERT_EQ(f.at("A"), 0.5);
  const auto r = prompt_distinguishability(cs, 0.5);
  EXPECT_FALSE(r.separable.at("A"));
  EXPECT_TRUE(prompt_distinguishability(cs, 0.49).separable.at("A"));
  EXPECT_THROW(prompt_distinguishability(cs, 0.0), std::invalid_argument);
  EXPECT_THROW(prompt_distinguishability(cs, 1.0), std::invalid_argument);
}

TEST(RankPrompts, SeparatedBeforeMixed) {
  std::vector<MixedBlock> blocks{{testutil::small_spec(0.0), 2}, {testutil::small_spec(40.0), 2}};
  const auto corpus = generate_mixed(blocks);
  const auto ranked = rank_prompts(corpus);
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].score, 1.0);
  EXPECT_EQ(ranked[1].score, 1.0);
  EXPECT_LT(ranked[2].score, 1.0);
  EXPECT_LT(ranked[0].prompt_id, ranked[1].prompt_id);
}

TEST(RankPrompts, EqualScoresOrderedById) {
  const auto corpus = generate(testutil::small_spec(50.0));
  const auto ranked = rank_prompts(corpus);
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    EXPECT_EQ(ranked[i].score, 1.0);
    EXPECT_LT(ranked[i - 1].prompt_id, ranked[i].prompt_id);
  }
}

TEST(RankPrompts, ScoresIncreaseWithSeparation) {
  auto spec = [](double sep) {
    SynthSpec s;
    s.n_models = 8;
    s.k_per_cell = 10;
    s.dim = 16;
    s.separation = sep;
    s.seed = 5;
    return s;
  };
  std::vector<MixedBlock> blocks{{spec(0.0), 6}, {spec(2.0), 6}, {spec(8.0), 6}};
  const auto corpus = generate_mixed(blocks);
  const auto reports = rank_prompts(corpus);
  std::map<std::string, double> score;
  for (const auto& r : reports) score[r.prompt_id] = r.score;
  double band[3] = {0, 0, 0};
  for (std::size_t i = 0; i < corpus.prompt_ids().size(); ++i) band[i / 6] += score[corpus.prompt_ids()[i]] / 6.0;
  EXPECT_LT(band[0], band[1]);
  EXPECT_LT(band[1], band[2]);
}
