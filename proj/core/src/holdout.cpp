// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/holdout.hpp"

#include "attrib/errors.hpp"
#include "attrib/rng.hpp"

namespace attrib {

namespace {
constexpr std::uint64_t kQueryTag = 0x71;
constexpr std::uint64_t kSubsampleTag = 0x73;
}  // namespace

HoldoutSplit holdout_split(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                           std::string_view model_id, std::uint64_t split_seed) {
  const auto cell = corpus.cell(prompt_id, model_id);
  if (cell.size() < 2) {
    throw DataError("cell (" + std::string(prompt_id) + ", " + std::string(model_id) + ") has " +
                    std::to_string(cell.size()) + " records; holding out a query needs at least 2");
  }
  Rng rng = Rng::stream(split_seed, {hash_id(prompt_id), hash_id(model_id), kQueryTag});
  const auto pick = static_cast<std::size_t>(rng.below(cell.size()));
  HoldoutSplit split;
  split.query = cell[pick];
  split.references.reserve(cell.size() - 1);
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i != pick) split.references.push_back(cell[i]);
  }
  return split;
}

HeldOutPrompt hold_out_prompt(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                              const HoldoutOptions& options) {
  HeldOutPrompt out;
  out.prompt_id = std::string(prompt_id);
  ClusterOptions cluster_options;
  cluster_options.k = options.k;
  cluster_options.sampling_seed = splitmix64(options.split_seed ^ kSubsampleTag);
  cluster_options.renormalize_centroid = options.renormalize_centroid;
  for (const auto& model : corpus.models_for_prompt(prompt_id)) {
    const auto split = holdout_split(corpus, prompt_id, model, options.split_seed);
    cluster_options.exclude.push_back(split.query);
  }
  if (cluster_options.exclude.empty()) {
    throw DataError("unknown prompt '" + std::string(prompt_id) + "'");
  }
  out.queries = cluster_options.exclude;
  out.clusters = build_clusters(corpus, prompt_id, cluster_options);
  return out;
}

}  // namespace attrib
