// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attrib/centroid.hpp"
#include "attrib/corpus.hpp"

// Closed-world stand-in for a leaderboard image: one generation of a
// (prompt, model) cell is held out as the query and never enters a centroid.
namespace attrib {

struct HoldoutSplit {
  std::size_t query = 0;               // record index
  std::vector<std::size_t> references; // record indices, corpus order
};

/// Seed-deterministic choice of one query out of the cell; the stream is
/// keyed by (split_seed, prompt, model) so splits do not depend on which
/// other cells are evaluated. Throws DataError for cells with < 2 records.
HoldoutSplit holdout_split(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                           std::string_view model_id, std::uint64_t split_seed);

struct HoldoutOptions {
  std::uint64_t split_seed = 0;
  /// Reference cluster size; unset uses every non-query record.
  std::optional<std::size_t> k;
  bool renormalize_centroid = false;
};

/// A prompt with one query held out per model and reference clusters built
/// from the remaining records. queries[i] is the record index of the query
/// drawn from clusters[i].model_id.
struct HeldOutPrompt {
  std::string prompt_id;
  std::vector<ModelCluster> clusters;
  std::vector<std::size_t> queries;
};

HeldOutPrompt hold_out_prompt(const EmbeddingCorpus& corpus, std::string_view prompt_id,
                              const HoldoutOptions& options);

}  // namespace attrib
