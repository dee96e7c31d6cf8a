// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/outlier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "attrib/centroid.hpp"
#include "attrib/errors.hpp"
#include "attrib/holdout.hpp"
#include "attrib/linalg.hpp"
#include "attrib/parallel.hpp"
#include "attrib/rng.hpp"

namespace attrib {

double linear_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double similarity_threshold(std::span<const double> similarities, double q) {
  if (similarities.empty()) throw std::invalid_argument("quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  // Equal to 1 - linear_quantile(1 - s, q), interpolated on descending
  // similarities so that rounding never drops the lower order statistic
  // below the threshold.
  std::vector<double> v(similarities.begin(), similarities.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

OutlierDetector OutlierDetector::fit(std::span<const Embedding> embeddings, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw std::invalid_argument("detector quantile must lie in (0, 1)");
  }
  if (embeddings.size() < 2) throw std::invalid_argument("detector fit needs at least 2 embeddings");
  OutlierDetector d;
  d.quantile_ = quantile;
  d.centroid_ = mean_embedding(embeddings);
  const double n = linalg::norm(d.centroid_);
  if (n == 0.0) throw DataError("detector fit: mean embedding has zero norm");
  for (auto& v : d.centroid_) v /= n;
  d.fit_similarities_.reserve(embeddings.size());
  for (const auto& e : embeddings) d.fit_similarities_.push_back(d.similarity(e));
  d.sim_thresh_ = similarity_threshold(d.fit_similarities_, quantile);
  return d;
}

double OutlierDetector::score(std::span<const float> query) const {
  return similarity(query) - sim_thresh_;
}

double OutlierDetector::similarity(std::span<const float> query) const {
  if (query.size() != centroid_.size()) {
    throw DataError("query dimension " + std::to_string(query.size()) + " does not match detector dimension " +
                    std::to_string(centroid_.size()));
  }
  const double cos = linalg::cosine(query, centroid_);
  if (std::isnan(cos)) throw DataError("detector score undefined for a zero query");
  return cos;
}

namespace {

constexpr std::uint64_t kFitTag = 0x66;

TargetReport sweep_outlier(const std::vector<HeldOutPrompt>& held_out, const EmbeddingCorpus& corpus,
                           const std::string& target, const OutlierSweepOptions& options) {
  TargetReport row;
  row.model = target;
  std::size_t correct = 0;
  for (const auto& prompt : held_out) {
    const auto it = std::find_if(prompt.clusters.begin(), prompt.clusters.end(),
                                 [&](const ModelCluster& c) { return c.model_id == target; });
    if (it == prompt.clusters.end() || prompt.clusters.size() < 2) continue;
    std::vector<Embedding> fit_set;
    const std::size_t m = std::min(options.fit_size, it->embeddings.size());
    Rng rng = Rng::stream(options.split_seed, {hash_id(prompt.prompt_id), hash_id(target), kFitTag});
    for (const std::size_t idx : rng.sample_without_replacement(it->embeddings.size(), m)) {
      fit_set.push_back(it->embeddings[idx]);
    }
    const auto detector = OutlierDetector::fit(fit_set, options.quantile);
    for (std::size_t i = 0; i < prompt.clusters.size(); ++i) {
      const double s = detector.score(corpus.record(prompt.queries[i]).embedding);
      const bool is_target = prompt.clusters[i].model_id == target;
      if (accept_margin(s) == is_target) ++correct;
      (is_target ? row.positive_scores : row.negative_scores).push_back(s);
    }
  }
  row.positives = row.positive_scores.size();
  row.negatives = row.negative_scores.size();
  if (row.positives == 0 || row.negatives == 0) {
    throw DataError("target '" + target + "' has no prompt shared with another model");
  }
  row.accuracy = static_cast<double>(correct) / static_cast<double>(row.positives + row.negatives);
  const auto roc = roc_curve(row.positive_scores, row.negative_scores, options.fpr_caps);
  row.roc_auc = roc.auc;
  row.operating_points = roc.operating_points;
  return row;
}

std::vector<HeldOutPrompt> hold_out_all(const EmbeddingCorpus& corpus, const OutlierSweepOptions& options) {
  const auto& prompts = corpus.prompt_ids();
  std::vector<HeldOutPrompt> held_out(prompts.size());
  const HoldoutOptions ho{options.split_seed, std::nullopt, false};
  parallel_for(prompts.size(), options.threads,
               [&](std::size_t i) { held_out[i] = hold_out_prompt(corpus, prompts[i], ho); });
  return held_out;
}

}  // namespace

TargetReport outlier_target_sweep(const EmbeddingCorpus& corpus, std::string_view target_model,
                                  const OutlierSweepOptions& options) {
  if (!corpus.has_model(target_model)) {
    throw DataError("target model '" + std::string(target_model) + "' is absent from the corpus");
  }
  return sweep_outlier(hold_out_all(corpus, options), corpus, std::string(target_model), options);
}

std::vector<TargetReport> outlier_target_sweep_all(const EmbeddingCorpus& corpus,
                                                   const OutlierSweepOptions& options) {
  const auto held_out = hold_out_all(corpus, options);
  const auto& models = corpus.model_ids();
  std::vector<TargetReport> rows(models.size());
  parallel_for(models.size(), options.threads,
               [&](std::size_t i) { rows[i] = sweep_outlier(held_out, corpus, models[i], options); });
  return rows;
}

}  // namespace attrib
