// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "attrib/attrib.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace attrib;

namespace {

// Unit vectors at the given cosines to e0 in the (e0, e1) plane, plus their
// mirror images so the mean lies exactly on e0.
std::vector<Embedding> fan(std::initializer_list<double> cosines) {
  std::vector<Embedding> out;
  for (const double c : cosines) {
    const double s = std::sqrt(1.0 - c * c);
    out.push_back({static_cast<float>(c), static_cast<float>(s)});
    out.push_back({static_cast<float>(c), static_cast<float>(-s)});
  }
  return out;
}

}  // namespace

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> d{0.4, 0.0, 0.3, 0.1, 0.2};
  EXPECT_NEAR(linear_quantile(d, 0.8), 0.32, 1e-15);
  EXPECT_EQ(linear_quantile(d, 0.0), 0.0);
  EXPECT_EQ(linear_quantile(d, 1.0), 0.4);
  EXPECT_THROW(linear_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST(Quantile, HandExampleThreshold) {
  const std::vector<double> s{1.0, 0.9, 0.8, 0.7, 0.6};
  EXPECT_NEAR(similarity_threshold(s, 0.8), 0.68, 1e-12);
}

TEST(Quantile, MatchesOracle) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(1 + rng.below(20));
    for (auto& x : v) x = rng.uniform();
    const double q = rng.uniform();
    EXPECT_NEAR(linear_quantile(v, q), oracle::quantile(v, q), 1e-15);
  }
}

TEST(Quantile, ThresholdKeepsLowerOrderStatistics) {
  Rng rng(31);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> s(2 + rng.below(60));
    for (auto& x : s) x = 2.0 * rng.uniform() - 1.0;
    const double q = rng.uniform();
    const double thresh = similarity_threshold(s, q);
    std::vector<double> d;
    for (const double x : s) d.push_back(1.0 - x);
    EXPECT_NEAR(thresh, 1.0 - oracle::quantile(d, q), 1e-12);
    const auto kept = std::count_if(s.begin(), s.end(), [&](double x) { return x - thresh >= 0.0; });
    EXPECT_GE(static_cast<std::size_t>(kept), static_cast<std::size_t>(std::floor(q * (s.size() - 1))) + 1);
  }
}

TEST(Outlier, IdenticalFitSetHasUnitThreshold) {
  const std::vector<Embedding> same(4, Embedding{0.6f, 0.8f});
  const auto d = OutlierDetector::fit(same);
  EXPECT_NEAR(d.sim_thresh(), 1.0, 1e-12);
  EXPECT_NEAR(linalg::norm(d.centroid()), 1.0, 1e-12);
}

TEST(Outlier, ScoresAgainstThreshold) {
  const auto d = OutlierDetector::fit(fan({1.0, 0.9, 0.8, 0.7, 0.6}));
  // Mirror pairs double every similarity; the quantile of the doubled list
  // is recomputed by the oracle rather than assumed.
  std::vector<double> dist;
  for (const double s : d.fit_similarities()) dist.push_back(1.0 - s);
  EXPECT_NEAR(d.sim_thresh(), 1.0 - oracle::quantile(dist, 0.8), 1e-12);

  const std::vector<float> on{1, 0};
  const std::vector<float> ortho{0, 1};
  const std::vector<float> anti{-1, 0};
  EXPECT_NEAR(d.score(on), 1.0 - d.sim_thresh(), 1e-12);
  EXPECT_NEAR(d.score(ortho), -d.sim_thresh(), 1e-7);
  EXPECT_NEAR(d.score(anti), -1.0 - d.sim_thresh(), 1e-12);
  EXPECT_TRUE(d.detect(on));
  EXPECT_FALSE(d.detect(ortho));
}

TEST(Outlier, DecisionBoundary) {
  EXPECT_TRUE(accept_margin(0.0));
  EXPECT_TRUE(accept_margin(1e-9));
  EXPECT_FALSE(accept_margin(-1e-9));
}

TEST(Outlier, Preconditions) {
  const auto pts = fan({0.9, 0.8});
  EXPECT_THROW(OutlierDetector::fit(pts, 1.0), std::invalid_argument);
  EXPECT_THROW(OutlierDetector::fit(pts, 0.0), std::invalid_argument);
  EXPECT_THROW(OutlierDetector::fit(std::vector<Embedding>{{1, 0}}), std::invalid_argument);
  EXPECT_THROW(OutlierDetector::fit(std::vector<Embedding>{{1, 0}, {-1, 0}}), DataError);
  const auto d = OutlierDetector::fit(pts);
  const std::vector<float> wrong{1, 0, 0};
  EXPECT_THROW(d.score(wrong), DataError);
}

TEST(Outlier, ScaleFreeQueryAndPermutationInvariantFit) {
  Rng rng(21);
  std::vector<Embedding> pts(9, Embedding(6));
  for (auto& p : pts) {
    for (auto& x : p) x = static_cast<float>(1.0 + 0.3 * rng.normal());
  }
  const auto d = OutlierDetector::fit(pts);
  auto shuffled = pts;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[0], shuffled[4]);
  const auto d2 = OutlierDetector::fit(shuffled);
  EXPECT_NEAR(d.sim_thresh(), d2.sim_thresh(), 1e-12);
  Embedding q(6);
  for (auto& x : q) x = static_cast<float>(rng.normal());
  Embedding q4 = q;
  for (auto& x : q4) x *= 4.0f;
  EXPECT_NEAR(d.score(q), d.score(q4), 1e-12);
  EXPECT_NEAR(d.score(q), d2.score(q), 1e-12);
}

TEST(Outlier, InSampleAcceptance) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng.below(40);
    std::vector<Embedding> pts(n, Embedding(5));
    for (auto& p : pts) {
      for (auto& x : p) x = static_cast<float>(0.5 + rng.normal());
    }
    const auto d = OutlierDetector::fit(pts, 0.8);
    std::size_t accepted = 0;
    for (const auto& p : pts) accepted += d.detect(p) ? 1 : 0;
    EXPECT_GE(accepted, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n)))) << n;
  }
}

TEST(Outlier, SweepRocUsesSharedCodePath) {
  const auto corpus = generate(testutil::small_spec(2.0, 12));
  const auto row = outlier_target_sweep(corpus, "m01");
  const auto r = roc_curve(row.positive_scores, row.negative_scores);
  EXPECT_EQ(r.auc, row.roc_auc);
  EXPECT_EQ(row.positives, corpus.prompt_ids().size());
  EXPECT_THROW(outlier_target_sweep(corpus, "zz"), DataError);
}
