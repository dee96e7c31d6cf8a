// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/distinguishability.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "attrib/errors.hpp"
#include "attrib/parallel.hpp"

namespace attrib {

std::map<std::string, double> nn_purity(std::span<const ModelCluster> clusters) {
  if (clusters.size() < 2) throw std::invalid_argument("nn_purity needs at least two models");

  // Flatten to row-major doubles with an owner label per row.
  std::size_t dim = 0;
  std::size_t total = 0;
  for (const auto& c : clusters) {
    for (const auto& e : c.embeddings) {
      if (total == 0) dim = e.size();
      if (e.size() != dim) throw DataError("nn_purity: embeddings disagree on dimension");
      ++total;
    }
  }
  if (total < 2) throw std::invalid_argument("nn_purity needs at least two points");

  std::vector<double> points;
  points.reserve(total * dim);
  std::vector<std::size_t> owner;
  owner.reserve(total);
  for (std::size_t m = 0; m < clusters.size(); ++m) {
    for (const auto& e : clusters[m].embeddings) {
      points.insert(points.end(), e.begin(), e.end());
      owner.push_back(m);
    }
  }

  std::vector<std::size_t> hits(clusters.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    const double* pi = points.data() + i * dim;
    double best = std::numeric_limits<double>::infinity();
    bool intra_at_best = false;
    for (std::size_t j = 0; j < total; ++j) {
      if (j == i) continue;
      const double* pj = points.data() + j * dim;
      double d2 = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        const double diff = pi[t] - pj[t];
        d2 += diff * diff;
      }
      if (d2 < best) {
        best = d2;
        intra_at_best = owner[j] == owner[i];
      } else if (d2 == best && owner[j] == owner[i]) {
        intra_at_best = true;
      }
    }
    if (intra_at_best) ++hits[owner[i]];
  }

  std::map<std::string, double> frac;
  for (std::size_t m = 0; m < clusters.size(); ++m) {
    const std::size_t k = clusters[m].embeddings.size();
    if (!frac.emplace(clusters[m].model_id, k == 0 ? 0.0 : static_cast<double>(hits[m]) / static_cast<double>(k)).second) {
      throw std::invalid_argument("nn_purity: model '" + clusters[m].model_id + "' appears twice");
    }
  }
  return frac;
}

SeparabilityReport prompt_distinguishability(std::span<const ModelCluster> clusters, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  SeparabilityReport report;
  report.prompt_id = clusters.empty() ? std::string{} : clusters.front().prompt_id;
  report.tau = tau;
  report.per_model_frac = nn_purity(clusters);
  for (const auto& [model, f] : report.per_model_frac) {
    const bool sep = f > tau;
    report.separable[model] = sep;
    if (sep) ++report.separable_count;
  }
  report.model_count = report.per_model_frac.size();
  report.score = static_cast<double>(report.separable_count) / static_cast<double>(report.model_count);
  return report;
}

std::vector<SeparabilityReport> rank_prompts(const EmbeddingCorpus& corpus, double tau, std::size_t threads) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  const auto& prompts = corpus.prompt_ids();
  std::vector<SeparabilityReport> reports(prompts.size());
  parallel_for(prompts.size(), threads, [&](std::size_t i) {
    const auto clusters = build_clusters(corpus, prompts[i]);
    reports[i] = prompt_distinguishability(clusters, tau);
  });
  // Compare scores as exact ratios so prompts with different model counts
  // still order correctly.
  std::sort(reports.begin(), reports.end(), [](const SeparabilityReport& a, const SeparabilityReport& b) {
    const auto lhs = a.separable_count * b.model_count;
    const auto rhs = b.separable_count * a.model_count;
    if (lhs != rhs) return lhs > rhs;
    return a.prompt_id < b.prompt_id;
  });
  return reports;
}

}  // namespace attrib
