// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "attrib/corpus.hpp"
#include "attrib/one_vs_rest.hpp"

namespace attrib {

inline constexpr double kDefaultQuantile = 0.8;
inline constexpr std::size_t kDefaultFitSize = 30;

/// q-quantile with linear interpolation between order statistics at
/// index q * (n - 1). q in [0, 1], values non-empty.
double linear_quantile(std::span<const double> values, double q);

/// 1 - quantile_q(1 - s_i): the similarity below which a point falls outside
/// the q share of the fit cluster.
double similarity_threshold(std::span<const double> similarities, double q);

/// Acceptance rule for detector scores: non-negative means "target".
inline bool accept_margin(double score) { return score >= 0.0; }

/// Single-model detector that needs no other model's generations: a unit
/// centroid plus a similarity threshold taken from the fit cluster's own
/// spread. Immutable after fit().
class OutlierDetector {
 public:
  /// Needs >= 2 embeddings with a nonzero mean and q in (0, 1).
  static OutlierDetector fit(std::span<const Embedding> embeddings, double quantile = kDefaultQuantile);

  /// cos(query, centroid) - sim_thresh. The query need not be normalized.
  double score(std::span<const float> query) const;
  bool detect(std::span<const float> query) const { return accept_margin(score(query)); }
  /// cos(query, centroid); the quantity fit_similarities() holds for the fit set.
  double similarity(std::span<const float> query) const;

  const std::vector<double>& centroid() const { return centroid_; }
  double sim_thresh() const { return sim_thresh_; }
  double quantile() const { return quantile_; }
  const std::vector<double>& fit_similarities() const { return fit_similarities_; }

 private:
  OutlierDetector() = default;

  std::vector<double> centroid_;
  double sim_thresh_ = 0.0;
  double quantile_ = kDefaultQuantile;
  std::vector<double> fit_similarities_;
};

struct OutlierSweepOptions {
  std::vector<double> fpr_caps{0.02, 0.05};
  std::uint64_t split_seed = 0;
  std::size_t fit_size = kDefaultFitSize;  // capped at the available references
  double quantile = kDefaultQuantile;
  std::size_t threads = 1;
};

/// Per prompt: hold out one query per model, fit a detector on up to
/// fit_size of the target's remaining generations, score every query.
/// Target queries are positives; scores pool over prompts.
TargetReport outlier_target_sweep(const EmbeddingCorpus& corpus, std::string_view target_model,
                                  const OutlierSweepOptions& options = {});

std::vector<TargetReport> outlier_target_sweep_all(const EmbeddingCorpus& corpus,
                                                   const OutlierSweepOptions& options = {});

}  // namespace attrib
