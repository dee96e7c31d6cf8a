// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/one_vs_rest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "attrib/errors.hpp"
#include "attrib/holdout.hpp"
#include "attrib/linalg.hpp"
#include "attrib/parallel.hpp"

namespace attrib {

namespace {

double checked_cosine(std::span<const float> query, const ModelCluster& c) {
  if (query.size() != c.centroid.size()) {
    throw DataError("query dimension " + std::to_string(query.size()) + " does not match centroid dimension " +
                    std::to_string(c.centroid.size()) + " of model '" + c.model_id + "'");
  }
  const double cos = linalg::cosine(query, c.centroid);
  if (std::isnan(cos)) throw DataError("zero-norm query or centroid (model '" + c.model_id + "')");
  return cos;
}

void check_scores(std::span<const double> scores, const char* what) {
  if (scores.empty()) throw std::invalid_argument(std::string("roc_curve: no ") + what + " scores");
  for (const double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument(std::string("roc_curve: non-finite ") + what + " score");
  }
}

}  // namespace

MarginScore margin_score(std::span<const float> query, const ModelCluster& target,
                         std::span<const ModelCluster> others) {
  if (others.empty()) throw std::invalid_argument("margin_score: no non-target clusters");
  MarginScore s;
  s.target_sim = checked_cosine(query, target);
  s.best_other_sim = -std::numeric_limits<double>::infinity();
  for (const auto& o : others) s.best_other_sim = std::max(s.best_other_sim, checked_cosine(query, o));
  s.margin = s.target_sim - s.best_other_sim;
  return s;
}

bool classify_target(const MarginScore& score, double threshold) { return score.margin >= threshold; }

bool classify_target(std::span<const float> query, const ModelCluster& target,
                     std::span<const ModelCluster> others, double threshold) {
  return classify_target(margin_score(query, target, others), threshold);
}

RocReport roc_curve(std::span<const double> positive_scores, std::span<const double> negative_scores,
                    std::span<const double> fpr_caps) {
  check_scores(positive_scores, "positive");
  check_scores(negative_scores, "negative");
  std::vector<double> pos(positive_scores.begin(), positive_scores.end());
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  RocReport report;
  report.positives = pos.size();
  report.negatives = neg.size();
  const double n_pos = static_cast<double>(pos.size());
  const double n_neg = static_cast<double>(neg.size());

  // Sweep distinct thresholds from high to low, merging ties into one point.
  report.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t ip = pos.size();
  std::size_t in = neg.size();
  while (ip > 0 || in > 0) {
    const double t = std::max(ip > 0 ? pos[ip - 1] : -std::numeric_limits<double>::infinity(),
                              in > 0 ? neg[in - 1] : -std::numeric_limits<double>::infinity());
    while (ip > 0 && pos[ip - 1] == t) --ip;
    while (in > 0 && neg[in - 1] == t) --in;
    const double tp = static_cast<double>(pos.size() - ip);
    const double fp = static_cast<double>(neg.size() - in);
    report.points.push_back({fp / n_neg, tp / n_pos, t});
  }

  // Exact pair counts: wins = #(p > n), losses = #(p < n), ties get half
  // credit. 0.5 + (wins - losses) / (2PN) keeps AUC(p,n) + AUC(n,p) == 1
  // bit-exact.
  std::int64_t wins = 0;
  std::int64_t losses = 0;
  for (const double p : pos) {
    const auto below = std::lower_bound(neg.begin(), neg.end(), p) - neg.begin();
    const auto not_above = std::upper_bound(neg.begin(), neg.end(), p) - neg.begin();
    wins += below;
    losses += static_cast<std::int64_t>(neg.size()) - not_above;
  }
  report.auc = 0.5 + static_cast<double>(wins - losses) / (2.0 * n_pos * n_neg);

  for (const double cap : fpr_caps) report.operating_points.push_back(tpr_at_fpr(report, cap));
  return report;
}

OperatingPoint tpr_at_fpr(const RocReport& report, double fpr_cap) {
  if (!(fpr_cap >= 0.0 && fpr_cap <= 1.0)) throw std::invalid_argument("fpr cap must lie in [0, 1]");
  if (report.points.empty()) throw std::invalid_argument("tpr_at_fpr: empty ROC report");
  OperatingPoint best{fpr_cap, -1.0, 0.0, 0.0};
  for (const auto& p : report.points) {
    if (p.fpr <= fpr_cap && p.tpr > best.tpr) {
      best.tpr = p.tpr;
      best.fpr = p.fpr;
      best.threshold = p.threshold;
    }
  }
  return best;
}

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

namespace {

TargetReport sweep_target(const std::vector<HeldOutPrompt>& held_out, const EmbeddingCorpus& corpus,
                          const std::string& target, const OvrOptions& options) {
  TargetReport row;
  row.model = target;
  std::size_t correct = 0;
  for (const auto& prompt : held_out) {
    const auto it = std::find_if(prompt.clusters.begin(), prompt.clusters.end(),
                                 [&](const ModelCluster& c) { return c.model_id == target; });
    if (it == prompt.clusters.end()) continue;
    std::vector<ModelCluster> others;
    for (const auto& c : prompt.clusters) {
      if (c.model_id != target) others.push_back(c);
    }
    if (others.empty()) continue;
    for (std::size_t i = 0; i < prompt.clusters.size(); ++i) {
      const auto& query = corpus.record(prompt.queries[i]).embedding;
      const double m = margin_score(query, *it, others).margin;
      const bool is_target = prompt.clusters[i].model_id == target;
      const bool accepted = m >= options.threshold;
      if (accepted == is_target) ++correct;
      (is_target ? row.positive_scores : row.negative_scores).push_back(m);
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

std::vector<HeldOutPrompt> hold_out_all(const EmbeddingCorpus& corpus, const OvrOptions& options) {
  const auto& prompts = corpus.prompt_ids();
  std::vector<HeldOutPrompt> held_out(prompts.size());
  HoldoutOptions ho{options.split_seed, options.k, options.renormalize_centroid};
  parallel_for(prompts.size(), options.threads,
               [&](std::size_t i) { held_out[i] = hold_out_prompt(corpus, prompts[i], ho); });
  return held_out;
}

}  // namespace

TargetReport fixed_target_sweep(const EmbeddingCorpus& corpus, std::string_view target_model,
                                const OvrOptions& options) {
  if (!corpus.has_model(target_model)) {
    throw DataError("target model '" + std::string(target_model) + "' is absent from the corpus");
  }
  return sweep_target(hold_out_all(corpus, options), corpus, std::string(target_model), options);
}

std::vector<TargetReport> fixed_target_sweep_all(const EmbeddingCorpus& corpus, const OvrOptions& options) {
  const auto held_out = hold_out_all(corpus, options);
  const auto& models = corpus.model_ids();
  std::vector<TargetReport> rows(models.size());
  parallel_for(models.size(), options.threads,
               [&](std::size_t i) { rows[i] = sweep_target(held_out, corpus, models[i], options); });
  return rows;
}

}  // namespace attrib
