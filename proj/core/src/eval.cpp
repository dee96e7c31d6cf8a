// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include "attrib/errors.hpp"
#include "attrib/holdout.hpp"
#include "attrib/parallel.hpp"
#include "attrib/rng.hpp"
#include "attrib/stats.hpp"

namespace attrib {

void EvalConfig::validate() const {
  if (k_values.empty()) throw std::invalid_argument("k_values must not be empty");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == 0) throw std::invalid_argument("k_values must be positive");
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      throw std::invalid_argument("k_values must be strictly ascending");
    }
  }
  if (k_rank_max == 0) throw std::invalid_argument("k_rank_max must be positive");
  if (repeats == 0) throw std::invalid_argument("repeats must be positive");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  for (const double cap : fpr_caps) {
    if (!(cap >= 0.0 && cap <= 1.0)) throw std::invalid_argument("fpr_caps must lie in [0, 1]");
  }
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (fit_size < 2) throw std::invalid_argument("fit_size must be at least 2");
  if (!(quantile > 0.0 && quantile < 1.0)) throw std::invalid_argument("quantile must lie in (0, 1)");
}

std::uint64_t repeat_seed(std::uint64_t split_seed, std::size_t repeat) {
  return splitmix64(split_seed ^ splitmix64(0x7265706561740000ULL + repeat));
}

const std::vector<DepthStat>& AccuracyCurve::at(std::size_t k) const {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == k) return per_k[i];
  }
  throw std::out_of_range("no accuracy recorded for k=" + std::to_string(k));
}

std::size_t ConfusionMatrix::row_sum(std::size_t row) const {
  std::size_t s = 0;
  for (const auto c : counts.at(row)) s += c;
  return s;
}

std::vector<std::vector<double>> ConfusionMatrix::rates() const {
  std::vector<std::vector<double>> out(counts.size(), std::vector<double>(labels.size(), 0.0));
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const std::size_t total = row_sum(a);
    if (total == 0) continue;
    for (std::size_t b = 0; b < counts[a].size(); ++b) {
      out[a][b] = static_cast<double>(counts[a][b]) / static_cast<double>(total);
    }
  }
  return out;
}

namespace {

void require_cell_sizes(const EmbeddingCorpus& corpus, std::size_t needed) {
  for (const auto& p : corpus.prompt_ids()) {
    for (const auto& m : corpus.models_for_prompt(p)) {
      const auto have = corpus.cell(p, m).size();
      if (have < needed) {
        throw DataError("insufficient records: cell (" + p + ", " + m + ") has " + std::to_string(have) +
                        ", evaluation needs " + std::to_string(needed));
      }
    }
  }
}

// Position (0-based) of the query's true model in the ranking.
std::size_t true_rank(const AttributionRanking& ranking, const std::string& model) {
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    if (ranking.entries[i].model_id == model) return i;
  }
  return ranking.entries.size();
}

struct PromptHits {
  std::vector<std::size_t> hits;  // hits[d]: true model within top-(d+1)
  std::size_t queries = 0;
  std::vector<std::pair<std::size_t, std::size_t>> confusions;  // (true, predicted) label indices
};

PromptHits evaluate_prompt(const EmbeddingCorpus& corpus, const std::string& prompt, std::uint64_t seed,
                           std::size_t k, std::size_t depth, const EvalConfig& config, bool keep_confusions) {
  const HoldoutOptions ho{seed, k, config.renormalize_centroid};
  const auto held = hold_out_prompt(corpus, prompt, ho);
  PromptHits out;
  out.hits.assign(depth, 0);
  for (std::size_t i = 0; i < held.clusters.size(); ++i) {
    const auto& truth = held.clusters[i].model_id;
    const auto ranking = rank_models(corpus.record(held.queries[i]).embedding, held.clusters, config.metric);
    const std::size_t pos = true_rank(ranking, truth);
    for (std::size_t d = pos; d < depth; ++d) ++out.hits[d];
    ++out.queries;
    if (keep_confusions) {
      const auto& labels = corpus.model_ids();
      const auto label = [&](const std::string& m) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), m) - labels.begin());
      };
      out.confusions.emplace_back(label(truth), label(ranking.predicted));
    }
  }
  return out;
}

std::size_t max_depth(const EmbeddingCorpus& corpus, std::size_t k_rank_max) {
  std::size_t min_models = corpus.model_ids().size();
  for (const auto& p : corpus.prompt_ids()) {
    min_models = std::min(min_models, corpus.models_for_prompt(p).size());
  }
  return std::max<std::size_t>(1, std::min(k_rank_max, min_models));
}

}  // namespace

AccuracyCurve topk_accuracy(const EmbeddingCorpus& corpus, const EvalConfig& config) {
  config.validate();
  require_cell_sizes(corpus, config.max_k() + 1);
  const auto& prompts = corpus.prompt_ids();

  AccuracyCurve curve;
  curve.k_values = config.k_values;
  curve.depth = max_depth(corpus, config.k_rank_max);
  curve.repeats = config.repeats;
  curve.per_repeat.assign(config.k_values.size(), {});
  for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const std::uint64_t seed = repeat_seed(config.split_seed, r);
      std::vector<PromptHits> slots(prompts.size());
      parallel_for(prompts.size(), config.threads, [&](std::size_t p) {
        slots[p] = evaluate_prompt(corpus, prompts[p], seed, config.k_values[ki], curve.depth, config, false);
      });
      std::vector<std::size_t> hits(curve.depth, 0);
      std::size_t queries = 0;
      for (const auto& s : slots) {
        for (std::size_t d = 0; d < curve.depth; ++d) hits[d] += s.hits[d];
        queries += s.queries;
      }
      curve.queries_per_repeat = queries;
      std::vector<double> acc(curve.depth);
      for (std::size_t d = 0; d < curve.depth; ++d) {
        acc[d] = static_cast<double>(hits[d]) / static_cast<double>(queries);
      }
      curve.per_repeat[ki].push_back(std::move(acc));
    }
  }

  curve.per_k.assign(config.k_values.size(), std::vector<DepthStat>(curve.depth));
  for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
    for (std::size_t d = 0; d < curve.depth; ++d) {
      std::vector<double> xs;
      for (const auto& rep : curve.per_repeat[ki]) xs.push_back(rep[d]);
      curve.per_k[ki][d] = {stats::mean(xs), stats::sample_stddev(xs)};
    }
  }
  return curve;
}

ConfusionMatrix confusion(const EmbeddingCorpus& corpus, const EvalConfig& config) {
  config.validate();
  const std::size_t k = config.max_k();
  require_cell_sizes(corpus, k + 1);
  const auto& prompts = corpus.prompt_ids();

  ConfusionMatrix cm;
  cm.labels = corpus.model_ids();
  cm.counts.assign(cm.labels.size(), std::vector<std::size_t>(cm.labels.size(), 0));
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const std::uint64_t seed = repeat_seed(config.split_seed, r);
    std::vector<PromptHits> slots(prompts.size());
    parallel_for(prompts.size(), config.threads, [&](std::size_t p) {
      slots[p] = evaluate_prompt(corpus, prompts[p], seed, k, 1, config, true);
    });
    for (const auto& s : slots) {
      for (const auto& [truth, predicted] : s.confusions) ++cm.counts[truth][predicted];
    }
  }
  return cm;
}

AttackResult prompt_controlled_attack(const EmbeddingCorpus& corpus, std::span<const std::string> prompts,
                                      std::size_t trials, std::uint64_t seed, Metric metric) {
  if (prompts.empty()) throw std::invalid_argument("prompt_controlled_attack: no prompts selected");
  if (trials < 1) throw std::invalid_argument("prompt_controlled_attack: trials must be positive");
  for (const auto& p : prompts) {
    if (!corpus.has_prompt(p)) throw DataError("unknown prompt '" + p + "'");
    for (const auto& m : corpus.models_for_prompt(p)) {
      if (corpus.cell(p, m).size() < 2) {
        throw DataError("cell (" + p + ", " + m + ") needs at least 2 records for a held-out query");
      }
    }
  }

  std::vector<std::size_t> correct(prompts.size(), 0);
  for (std::size_t pi = 0; pi < prompts.size(); ++pi) {
    const auto& prompt = prompts[pi];
    const auto models = corpus.models_for_prompt(prompt);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = Rng::stream(seed, {hash_id(prompt), t});
      const auto& model = models[static_cast<std::size_t>(rng.below(models.size()))];
      const auto cell = corpus.cell(prompt, model);
      const std::size_t query = cell[static_cast<std::size_t>(rng.below(cell.size()))];
      ClusterOptions opts;
      opts.exclude = {query};
      const auto clusters = build_clusters(corpus, prompt, opts);
      if (rank_models(corpus.record(query).embedding, clusters, metric).predicted == model) ++correct[pi];
    }
  }

  AttackResult result;
  result.trials = trials * prompts.size();
  for (const auto c : correct) result.correct += c;
  result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.trials);
  return result;
}

std::vector<std::string> select_separable_prompts(const EmbeddingCorpus& corpus, double tau, std::size_t count,
                                                  std::uint64_t seed, std::size_t threads) {
  std::vector<std::string> perfect;
  for (const auto& report : rank_prompts(corpus, tau, threads)) {
    if (report.separable_count == report.model_count) perfect.push_back(report.prompt_id);
  }
  std::sort(perfect.begin(), perfect.end());
  const std::size_t take = std::min(count, perfect.size());
  Rng rng = Rng::stream(seed, {0x5e1ec7ULL});
  std::vector<std::string> chosen;
  for (const std::size_t i : rng.sample_without_replacement(perfect.size(), take)) chosen.push_back(perfect[i]);
  return chosen;
}

CorrelationReport distinguishability_correlation(const EmbeddingCorpus& corpus, const EvalConfig& config) {
  config.validate();
  const std::size_t k = config.max_k();
  require_cell_sizes(corpus, k + 1);
  const auto& prompts = corpus.prompt_ids();

  CorrelationReport report;
  report.points.resize(prompts.size());
  parallel_for(prompts.size(), config.threads, [&](std::size_t p) {
    auto& point = report.points[p];
    point.prompt_id = prompts[p];
    point.score = prompt_distinguishability(build_clusters(corpus, prompts[p]), config.tau).score;
    std::size_t hits = 0;
    std::size_t queries = 0;
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const auto s = evaluate_prompt(corpus, prompts[p], repeat_seed(config.split_seed, r), k, 1, config, false);
      hits += s.hits[0];
      queries += s.queries;
    }
    point.top1 = static_cast<double>(hits) / static_cast<double>(queries);
  });

  std::vector<double> scores;
  std::vector<double> top1;
  for (const auto& p : report.points) {
    scores.push_back(p.score);
    top1.push_back(p.top1);
  }
  report.spearman = stats::spearman(scores, top1);
  report.degenerate = !report.spearman.has_value();
  return report;
}

OvrOptions ovr_options(const EvalConfig& config) {
  OvrOptions o;
  o.fpr_caps = config.fpr_caps;
  o.split_seed = config.split_seed;
  o.renormalize_centroid = config.renormalize_centroid;
  o.threads = config.threads;
  return o;
}

OutlierSweepOptions outlier_options(const EvalConfig& config) {
  OutlierSweepOptions o;
  o.fpr_caps = config.fpr_caps;
  o.split_seed = config.split_seed;
  o.fit_size = config.fit_size;
  o.quantile = config.quantile;
  o.threads = config.threads;
  return o;
}

}  // namespace attrib
