// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "attrib/centroid.hpp"
#include "attrib/corpus.hpp"

namespace attrib {

inline constexpr double kDefaultTau = 0.5;

/// Nearest-neighbour cluster purity per model.
///
/// Every embedding of every cluster is matched to its nearest neighbour in
/// the union of all clusters, excluding the point itself. frac(model) is
/// the share of that model's points whose neighbour is from the same model.
/// When several points tie at the minimum distance, the point counts as a
/// hit if any of them belongs to its own model.
///
/// Throws std::invalid_argument with fewer than two clusters or two points
/// in total, DataError on dimension mismatch.
std::map<std::string, double> nn_purity(std::span<const ModelCluster> clusters);

struct SeparabilityReport {
  std::string prompt_id;
  std::map<std::string, double> per_model_frac;
  double tau = kDefaultTau;
  std::map<std::string, bool> separable;  // frac > tau
  std::size_t separable_count = 0;
  std::size_t model_count = 0;
  double score = 0.0;  // separable_count / model_count
};

/// Thresholds nn_purity at `tau` (strictly) and averages the indicators.
/// tau must lie in (0, 1).
SeparabilityReport prompt_distinguishability(std::span<const ModelCluster> clusters, double tau = kDefaultTau);

/// Reports for every prompt of the corpus (all records of each cell),
/// sorted by descending score with ties in prompt_id order. Prompts are
/// independent and processed on up to `threads` workers.
std::vector<SeparabilityReport> rank_prompts(const EmbeddingCorpus& corpus, double tau = kDefaultTau,
                                             std::size_t threads = 1);

}  // namespace attrib
