// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attrib/corpus.hpp"

namespace attrib {

/// The reference generations of one model on one prompt and their centroid.
struct ModelCluster {
  std::string prompt_id;
  std::string model_id;
  std::vector<Embedding> embeddings;
  std::vector<double> centroid;

  std::size_t k() const { return embeddings.size(); }
  std::size_t dim() const { return centroid.size(); }
};

/// Component-wise mean, accumulated in double in input order.
std::vector<double> mean_embedding(std::span<const Embedding> embeddings);

/// Cluster over `embeddings` (at least one, all the same dimension). With
/// `renormalize`, the centroid is scaled to unit norm after averaging.
ModelCluster make_cluster(std::string prompt_id, std::string model_id,
                          std::vector<Embedding> embeddings, bool renormalize = false);

enum class Metric {
  kEuclidean,  // ||q - c||_2
  kCosine,     // 1 - cos(q, c)
};

std::string_view to_string(Metric metric);
/// Accepts "euclidean" or "cosine"; throws std::invalid_argument otherwise.
Metric parse_metric(std::string_view name);

struct ClusterOptions {
  /// Cluster size. Unset uses every record of the cell; otherwise a uniform
  /// subsample without replacement, drawn from a stream keyed by
  /// (sampling_seed, prompt, model).
  std::optional<std::size_t> k;
  std::uint64_t sampling_seed = 0;
  bool renormalize_centroid = false;
  /// Record indices never allowed into any cluster (held-out queries).
  std::vector<std::size_t> exclude;
};

/// One cluster per corpus model for `prompt_id`, in manifest order.
/// Throws DataError for an unknown prompt or a model without records for it
/// (after exclusions), std::invalid_argument if k is zero or exceeds a cell.
std::vector<ModelCluster> build_clusters(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                                         const ClusterOptions& options = {});

struct RankedModel {
  std::string model_id;
  double distance = 0.0;
};

struct AttributionRanking {
  std::optional<RecordKey> query_key;
  /// Ascending by distance; equal distances ordered by model_id.
  std::vector<RankedModel> entries;
  std::string predicted;
};

/// Distance from `query` to every centroid, sorted ascending. Throws
/// std::invalid_argument for an empty or duplicate-model cluster list,
/// DataError for dimension mismatch (or a zero vector under kCosine).
AttributionRanking rank_models(std::span<const float> query, std::span<const ModelCluster> clusters,
                               Metric metric = Metric::kEuclidean);

/// First `k_rank` model ids of rank_models(); 1 <= k_rank <= clusters.size().
std::vector<std::string> predict_topk(std::span<const float> query, std::span<const ModelCluster> clusters,
                                      std::size_t k_rank, Metric metric = Metric::kEuclidean);

}  // namespace attrib
