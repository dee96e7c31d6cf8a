// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "attrib/attrib.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace attrib;
using testutil::rec;

namespace {

ModelCluster at(std::string model, std::vector<float> c) { return make_cluster("p", std::move(model), {std::move(c)}); }

}  // namespace

TEST(Margin, Extremes) {
  const std::vector<float> q{1, 0};
  const std::vector<ModelCluster> others{at("o", {0, 1})};
  const auto m = margin_score(q, at("t", {1, 0}), others);
  EXPECT_EQ(m.target_sim, 1.0);
  EXPECT_EQ(m.best_other_sim, 0.0);
  EXPECT_EQ(m.margin, 1.0);
}

TEST(Margin, SymmetricQueryGivesZero) {
  const std::vector<float> q{1, 1};
  const std::vector<ModelCluster> others{at("o", {0, 1})};
  EXPECT_NEAR(margin_score(q, at("t", {1, 0}), others).margin, 0.0, 1e-15);
}

TEST(Margin, ThirtyDegrees) {
  const std::vector<float> q{1, 0};
  const float c30 = static_cast<float>(std::cos(std::numbers::pi / 6));
  const std::vector<ModelCluster> others{at("o", {0, 1})};
  const auto m = margin_score(q, at("t", {c30, 0.5f}), others);
  EXPECT_NEAR(m.margin, 0.8660, 1e-4);
  EXPECT_EQ(m.margin, m.target_sim - m.best_other_sim);
}

TEST(Margin, TakesBestOther) {
  const std::vector<float> q{1, 0};
  const std::vector<ModelCluster> others{at("o1", {0, 1}), at("o2", {1, 1}), at("o3", {-1, 0})};
  const auto m = margin_score(q, at("t", {1, 0}), others);
  EXPECT_NEAR(m.best_other_sim, std::sqrt(0.5), 1e-15);
}

TEST(Margin, Errors) {
  const std::vector<float> q{1, 0};
  EXPECT_THROW(margin_score(q, at("t", {1, 0}), std::vector<ModelCluster>{}), std::invalid_argument);
  const std::vector<ModelCluster> zero{at("o", {0, 0})};
  EXPECT_THROW(margin_score(q, at("t", {1, 0}), zero), DataError);
}

TEST(ClassifyTarget, BoundaryIsInclusive) {
  EXPECT_TRUE(classify_target(MarginScore{0, 0, 0.2}, 0.0));
  EXPECT_TRUE(classify_target(MarginScore{0, 0, 0.0}, 0.0));
  EXPECT_FALSE(classify_target(MarginScore{0, 0, 0.1}, 0.15));
}

TEST(Roc, PerfectSeparation) {
  const auto r = roc_curve(std::vector<double>{2, 3}, std::vector<double>{0, 1});
  EXPECT_EQ(r.auc, 1.0);
}

TEST(Roc, FullTie) {
  const auto r = roc_curve(std::vector<double>{1}, std::vector<double>{1});
  EXPECT_EQ(r.auc, 0.5);
  EXPECT_EQ(r.points.size(), 2u);
}

TEST(Roc, HandCountedThreeQuarters) {
  const std::vector<double> pos{3, 1}, neg{2, 0};
  const std::vector<double> caps{0.02};
  const auto r = roc_curve(pos, neg, caps);
  EXPECT_EQ(r.auc, 0.75);
  ASSERT_EQ(r.points.size(), 5u);  // +inf, 3, 2, 1, 0
  EXPECT_EQ(r.points.front().fpr, 0.0);
  EXPECT_EQ(r.points.front().tpr, 0.0);
  EXPECT_EQ(r.points.back().fpr, 1.0);
  EXPECT_EQ(r.points.back().tpr, 1.0);
  ASSERT_EQ(r.operating_points.size(), 1u);
  EXPECT_EQ(r.operating_points[0].tpr, 0.5);
  EXPECT_EQ(r.operating_points[0].fpr, 0.0);
  EXPECT_EQ(r.operating_points[0].threshold, 3.0);
  EXPECT_EQ(tpr_at_fpr(r, 1.0).tpr, 1.0);
  EXPECT_EQ(tpr_at_fpr(r, 0.5).tpr, 1.0);  // threshold 1: fpr 0.5
  EXPECT_EQ(trapezoid_auc(r.points), r.auc);
}

TEST(Roc, Errors) {
  EXPECT_THROW(roc_curve(std::vector<double>{}, std::vector<double>{1}), std::invalid_argument);
  EXPECT_THROW(roc_curve(std::vector<double>{1}, std::vector<double>{}), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(roc_curve(std::vector<double>{nan}, std::vector<double>{1}), std::invalid_argument);
  const auto r = roc_curve(std::vector<double>{1}, std::vector<double>{0});
  EXPECT_THROW(tpr_at_fpr(r, 1.5), std::invalid_argument);
}

TEST(Roc, MatchesPairCountingOracleOnRandomTiedScores) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> pos(1 + rng.below(12)), neg(1 + rng.below(12));
    for (auto& s : pos) s = static_cast<double>(rng.below(6));
    for (auto& s : neg) s = static_cast<double>(rng.below(6));
    const auto r = roc_curve(pos, neg);
    EXPECT_NEAR(r.auc, oracle::auc(pos, neg), 1e-15);
    EXPECT_NEAR(trapezoid_auc(r.points), r.auc, 1e-12);
    for (const double cap : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
      EXPECT_EQ(tpr_at_fpr(r, cap).tpr, oracle::tpr_at_fpr(pos, neg, cap));
    }
    // Every point is reproduced by re-classifying at its threshold.
    for (const auto& pt : r.points) {
      double tp = 0, fp = 0;
      for (const double s : pos) tp += s >= pt.threshold ? 1 : 0;
      for (const double s : neg) fp += s >= pt.threshold ? 1 : 0;
      EXPECT_EQ(pt.tpr, tp / static_cast<double>(pos.size()));
      EXPECT_EQ(pt.fpr, fp / static_cast<double>(neg.size()));
    }
  }
}

TEST(Roc, IdenticalDistributionsGiveChanceAuc) {
  Rng rng(17);
  std::vector<double> pos(500), neg(500);
  for (auto& s : pos) s = rng.normal();
  for (auto& s : neg) s = rng.normal();
  const auto r = roc_curve(pos, neg);
  EXPECT_GE(r.auc, 0.4);
  EXPECT_LE(r.auc, 0.6);
}

TEST(FixedTarget, HandBuiltSinglePrompt) {
  const auto corpus = EmbeddingCorpus::from_records({rec("p", "a", 0, {1, 0}), rec("p", "a", 1, {1, 0}),
                                                     rec("p", "b", 0, {1, 1}), rec("p", "b", 1, {1, 1})});
  const auto row = fixed_target_sweep(corpus, "a");
  const double m = 1.0 - std::sqrt(0.5);
  ASSERT_EQ(row.positive_scores.size(), 1u);
  ASSERT_EQ(row.negative_scores.size(), 1u);
  EXPECT_NEAR(row.positive_scores[0], m, 1e-15);
  EXPECT_NEAR(row.negative_scores[0], -m, 1e-15);
  EXPECT_EQ(row.accuracy, 1.0);
  EXPECT_EQ(row.roc_auc, 1.0);
  ASSERT_EQ(row.operating_points.size(), 2u);
  EXPECT_EQ(row.operating_points[0].tpr, 1.0);
}

TEST(FixedTarget, OverwhelmingSeparationIsPerfect) {
  const auto corpus = generate(testutil::small_spec(50.0));
  for (const auto& row : fixed_target_sweep_all(corpus)) {
    EXPECT_EQ(row.accuracy, 1.0) << row.model;
    EXPECT_EQ(row.roc_auc, 1.0) << row.model;
    for (const auto& op : row.operating_points) EXPECT_EQ(op.tpr, 1.0) << row.model;
  }
}

TEST(FixedTarget, UnknownTargetIsDataError) {
  const auto corpus = generate(testutil::small_spec(1.0));
  EXPECT_THROW(fixed_target_sweep(corpus, "nobody"), DataError);
}

TEST(FixedTarget, MarginSignAgreesWithCosineRanking) {
  const auto corpus = generate(testutil::small_spec(1.5));
  HoldoutOptions ho;
  ho.split_seed = 4;
  for (const auto& prompt : corpus.prompt_ids()) {
    const auto held = hold_out_prompt(corpus, prompt, ho);
    for (std::size_t t = 0; t < held.clusters.size(); ++t) {
      std::vector<ModelCluster> others;
      for (std::size_t o = 0; o < held.clusters.size(); ++o) {
        if (o != t) others.push_back(held.clusters[o]);
      }
      for (const std::size_t qi : held.queries) {
        const auto& q = corpus.record(qi).embedding;
        const auto m = margin_score(q, held.clusters[t], others);
        if (m.margin == 0.0) continue;
        const auto r = rank_models(q, held.clusters, Metric::kCosine);
        EXPECT_EQ(m.margin > 0.0, r.predicted == held.clusters[t].model_id);
      }
    }
  }
}
