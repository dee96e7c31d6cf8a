// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attrib/centroid.hpp"
#include "attrib/corpus.hpp"
#include "attrib/distinguishability.hpp"
#include "attrib/one_vs_rest.hpp"
#include "attrib/outlier.hpp"

// Experiment drivers. Every driver holds out one generation per
// (prompt, model) cell as the query, so a query never contributes to a
// centroid of the same pass. Accuracies are micro-averaged over cells.
// Work is split per prompt and merged in prompt order; results do not
// depend on `threads`.
namespace attrib {

struct EvalConfig {
  std::vector<std::size_t> k_values{1, 5, 10, 15};  // strictly ascending
  std::size_t k_rank_max = 5;
  std::size_t repeats = 5;
  std::uint64_t split_seed = 0;
  double tau = kDefaultTau;
  Metric metric = Metric::kEuclidean;
  bool renormalize_centroid = false;
  std::vector<double> fpr_caps{0.02, 0.05};
  std::size_t trials = 100;           // prompt-attack, per selected prompt
  std::vector<std::string> prompts;   // prompt-attack; empty selects separable prompts
  std::size_t attack_prompts = 5;     // how many to select when `prompts` is empty
  std::size_t fit_size = kDefaultFitSize;
  double quantile = kDefaultQuantile;
  std::size_t threads = 1;            // execution only, never affects results

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::size_t max_k() const { return k_values.back(); }
};

/// Per-repeat seed: repeat r reseeds splits and subsamples.
std::uint64_t repeat_seed(std::uint64_t split_seed, std::size_t repeat);

struct DepthStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample std over repeats
};

struct AccuracyCurve {
  std::vector<std::size_t> k_values;
  std::size_t depth = 0;               // top-1 .. top-depth
  std::size_t repeats = 0;
  std::size_t queries_per_repeat = 0;
  std::vector<std::vector<DepthStat>> per_k;                   // [k][depth]
  std::vector<std::vector<std::vector<double>>> per_repeat;    // [k][repeat][depth]

  /// Row of per_k for cluster size k; throws std::out_of_range if absent.
  const std::vector<DepthStat>& at(std::size_t k) const;
};

/// Top-1..top-k_rank_max accuracy for every k in k_values and repeat. Every
/// cell needs at least max(k_values) + 1 records.
AccuracyCurve topk_accuracy(const EmbeddingCorpus& corpus, const EvalConfig& config);

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;  // [true][predicted]

  std::size_t row_sum(std::size_t row) const;
  /// counts[a][b] / row_sum(a); rows with no queries stay zero.
  std::vector<std::vector<double>> rates() const;
};

/// Top-1 confusion counts summed over repeats, using the largest k in
/// k_values as cluster size.
ConfusionMatrix confusion(const EmbeddingCorpus& corpus, const EvalConfig& config);

struct AttackResult {
  double accuracy = 0.0;
  std::size_t trials = 0;   // total over prompts
  std::size_t correct = 0;
};

/// For each selected prompt, `trials` times: draw a model uniformly, hold out
/// one of its generations uniformly, attribute it against centroids of all
/// remaining generations, and count top-1 hits.
AttackResult prompt_controlled_attack(const EmbeddingCorpus& corpus, std::span<const std::string> prompts,
                                      std::size_t trials, std::uint64_t seed,
                                      Metric metric = Metric::kEuclidean);

/// Up to `count` prompts with distinguishability 1.0 under `tau`, drawn
/// uniformly with `seed` and returned in prompt_id order.
std::vector<std::string> select_separable_prompts(const EmbeddingCorpus& corpus, double tau, std::size_t count,
                                                  std::uint64_t seed, std::size_t threads = 1);

struct CorrelationPoint {
  std::string prompt_id;
  double score = 0.0;  // D(i)
  double top1 = 0.0;   // held-out top-1 accuracy on this prompt
};

struct CorrelationReport {
  std::vector<CorrelationPoint> points;  // corpus prompt order
  std::optional<double> spearman;        // unset when degenerate
  bool degenerate = false;               // < 2 prompts or a constant column
};

/// Pairs each prompt's distinguishability with its top-1 accuracy (cluster
/// size max(k_values), averaged over repeats) and rank-correlates them.
CorrelationReport distinguishability_correlation(const EmbeddingCorpus& corpus, const EvalConfig& config);

OvrOptions ovr_options(const EvalConfig& config);
OutlierSweepOptions outlier_options(const EvalConfig& config);

}  // namespace attrib
