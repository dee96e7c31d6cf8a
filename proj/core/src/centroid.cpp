// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "attrib/errors.hpp"
#include "attrib/linalg.hpp"
#include "attrib/rng.hpp"

namespace attrib {

std::vector<double> mean_embedding(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) throw std::invalid_argument("mean of zero embeddings");
  const std::size_t dim = embeddings.front().size();
  std::vector<double> sum(dim, 0.0);
  for (const auto& e : embeddings) {
    if (e.size() != dim) throw DataError("embeddings disagree on dimension");
    for (std::size_t i = 0; i < dim; ++i) sum[i] += static_cast<double>(e[i]);
  }
  const double n = static_cast<double>(embeddings.size());
  for (auto& v : sum) v /= n;
  return sum;
}

ModelCluster make_cluster(std::string prompt_id, std::string model_id,
                          std::vector<Embedding> embeddings, bool renormalize) {
  ModelCluster c;
  c.centroid = mean_embedding(embeddings);
  if (renormalize) {
    const double n = linalg::norm(c.centroid);
    if (n == 0.0) throw DataError("cannot renormalize zero centroid for model " + model_id);
    for (auto& v : c.centroid) v /= n;
  }
  c.prompt_id = std::move(prompt_id);
  c.model_id = std::move(model_id);
  c.embeddings = std::move(embeddings);
  return c;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kEuclidean:
      return "euclidean";
    case Metric::kCosine:
      return "cosine";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::kEuclidean;
  if (name == "cosine") return Metric::kCosine;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "' (expected euclidean|cosine)");
}

std::vector<ModelCluster> build_clusters(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                                         const ClusterOptions& options) {
  if (!corpus.has_prompt(prompt_id)) {
    throw DataError("unknown prompt '" + std::string(prompt_id) + "'");
  }
  if (options.k && *options.k == 0) throw std::invalid_argument("cluster size k must be positive");
  const std::set<std::size_t> excluded(options.exclude.begin(), options.exclude.end());

  std::vector<ModelCluster> clusters;
  for (const auto& model : corpus.model_ids()) {
    const auto cell = corpus.cell(prompt_id, model);
    if (cell.empty()) {
      throw DataError("model '" + model + "' has no records for prompt '" + std::string(prompt_id) + "'");
    }
    std::vector<std::size_t> available;
    for (const std::size_t idx : cell) {
      if (!excluded.contains(idx)) available.push_back(idx);
    }
    if (available.empty()) {
      throw DataError("model '" + model + "' has no reference records for prompt '" +
                      std::string(prompt_id) + "'");
    }
    std::vector<std::size_t> chosen = available;
    if (options.k) {
      if (*options.k > available.size()) {
        throw std::invalid_argument("k=" + std::to_string(*options.k) + " exceeds the " +
                                    std::to_string(available.size()) + " records of model '" + model +
                                    "' on prompt '" + std::string(prompt_id) + "'");
      }
      if (*options.k < available.size()) {
        Rng rng = Rng::stream(options.sampling_seed, {hash_id(prompt_id), hash_id(model)});
        chosen.clear();
        for (const std::size_t pos : rng.sample_without_replacement(available.size(), *options.k)) {
          chosen.push_back(available[pos]);
        }
      }
    }
    std::vector<Embedding> embeddings;
    embeddings.reserve(chosen.size());
    for (const std::size_t idx : chosen) embeddings.push_back(corpus.record(idx).embedding);
    clusters.push_back(make_cluster(std::string(prompt_id), model, std::move(embeddings),
                                    options.renormalize_centroid));
  }
  return clusters;
}

AttributionRanking rank_models(std::span<const float> query, std::span<const ModelCluster> clusters,
                               Metric metric) {
  if (clusters.empty()) throw std::invalid_argument("rank_models: no candidate clusters");
  AttributionRanking ranking;
  ranking.entries.reserve(clusters.size());
  std::set<std::string_view> seen;
  for (const auto& c : clusters) {
    if (!seen.insert(c.model_id).second) {
      throw std::invalid_argument("rank_models: model '" + c.model_id + "' appears twice");
    }
    if (c.centroid.size() != query.size()) {
      throw DataError("query dimension " + std::to_string(query.size()) + " does not match centroid dimension " +
                      std::to_string(c.centroid.size()) + " of model '" + c.model_id + "'");
    }
    double d = 0.0;
    if (metric == Metric::kEuclidean) {
      d = std::sqrt(linalg::squared_distance(query, c.centroid));
    } else {
      const double cos = linalg::cosine(query, c.centroid);
      if (std::isnan(cos)) throw DataError("cosine distance undefined for a zero vector (model '" + c.model_id + "')");
      d = 1.0 - cos;
    }
    ranking.entries.push_back({c.model_id, d});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(), [](const RankedModel& a, const RankedModel& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.model_id < b.model_id;
  });
  ranking.predicted = ranking.entries.front().model_id;
  return ranking;
}

std::vector<std::string> predict_topk(std::span<const float> query, std::span<const ModelCluster> clusters,
                                      std::size_t k_rank, Metric metric) {
  if (k_rank < 1 || k_rank > clusters.size()) {
    throw std::invalid_argument("k_rank=" + std::to_string(k_rank) + " outside [1, " +
                                std::to_string(clusters.size()) + "]");
  }
  const auto ranking = rank_models(query, clusters, metric);
  std::vector<std::string> out;
  out.reserve(k_rank);
  for (std::size_t i = 0; i < k_rank; ++i) out.push_back(ranking.entries[i].model_id);
  return out;
}

}  // namespace attrib
