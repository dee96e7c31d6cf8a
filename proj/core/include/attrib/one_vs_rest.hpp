// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attrib/centroid.hpp"
#include "attrib/corpus.hpp"

namespace attrib {

// ---- margin scoring --------------------------------------------------------

struct MarginScore {
  double target_sim = 0.0;      // cos(query, target centroid)
  double best_other_sim = 0.0;  // max cos(query, other centroid)
  double margin = 0.0;          // target_sim - best_other_sim
};

/// Throws std::invalid_argument if `others` is empty, DataError on a
/// dimension mismatch or a zero-norm query/centroid.
MarginScore margin_score(std::span<const float> query, const ModelCluster& target,
                         std::span<const ModelCluster> others);

/// margin >= threshold. A margin of exactly the threshold is accepted.
bool classify_target(const MarginScore& score, double threshold = 0.0);
bool classify_target(std::span<const float> query, const ModelCluster& target,
                     std::span<const ModelCluster> others, double threshold = 0.0);

// ---- ROC ---------------------------------------------------------------------

/// One operating point: scores >= threshold are called positive.
struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct OperatingPoint {
  double fpr_cap = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;       // achieved, <= fpr_cap
  double threshold = 0.0;
};

struct RocReport {
  /// Starts at (0, 0) with threshold +inf, then one point per distinct score
  /// in descending order; the last point is (1, 1).
  std::vector<RocPoint> points;
  /// Mann-Whitney statistic P(pos > neg) + P(pos == neg) / 2.
  double auc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<OperatingPoint> operating_points;
};

/// Throws std::invalid_argument for empty inputs, non-finite scores, or a cap
/// outside [0, 1].
RocReport roc_curve(std::span<const double> positive_scores, std::span<const double> negative_scores,
                    std::span<const double> fpr_caps = {});

/// Highest TPR among points with fpr <= fpr_cap (step function, no
/// interpolation), with the largest threshold that achieves it.
OperatingPoint tpr_at_fpr(const RocReport& report, double fpr_cap);

/// Trapezoidal area under `points`.
double trapezoid_auc(std::span<const RocPoint> points);

// ---- fixed-target sweeps ---------------------------------------------------

/// One Table-style row: how well one target model is told apart.
struct TargetReport {
  std::string model;
  double accuracy = 0.0;  // (TP + TN) / (P + N) at the decision threshold
  double roc_auc = 0.0;
  std::vector<OperatingPoint> operating_points;  // one per requested cap
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<double> positive_scores;  // prompt order
  std::vector<double> negative_scores;  // prompt order, then model order
};

struct OvrOptions {
  std::vector<double> fpr_caps{0.02, 0.05};
  std::uint64_t split_seed = 0;
  std::optional<std::size_t> k;
  bool renormalize_centroid = false;
  double threshold = 0.0;
  std::size_t threads = 1;
};

/// For every prompt, hold out one query per model, build reference clusters
/// from the rest, and score every query by its margin for `target_model`.
/// Queries from the target are positives, all others negatives; scores are
/// pooled over prompts. Prompts without the target are skipped. Throws
/// DataError if the target is absent from the corpus.
TargetReport fixed_target_sweep(const EmbeddingCorpus& corpus, std::string_view target_model,
                                const OvrOptions& options = {});

/// fixed_target_sweep for every model, in manifest order, sharing one
/// hold-out split per prompt.
std::vector<TargetReport> fixed_target_sweep_all(const EmbeddingCorpus& corpus, const OvrOptions& options = {});

}  // namespace attrib
