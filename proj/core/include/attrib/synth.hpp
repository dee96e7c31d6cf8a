// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attrib/corpus.hpp"

namespace attrib {

/// Gaussian clusters per (prompt, model) with controlled separation.
///
/// Per prompt, the model means are the vertices of a regular simplex with
/// edge length separation * sigma, placed in a random orthonormal frame of
/// R^dim (so dim >= n_models - 1). Each cell then draws k_per_cell samples
/// from an isotropic Gaussian with std sigma around its mean.
struct SynthSpec {
  std::size_t n_models = 19;
  std::size_t n_prompts = 280;
  std::size_t k_per_cell = 30;
  std::size_t dim = 64;
  double separation = 6.0;  // pairwise mean distance in units of sigma
  double sigma = 1.0;
  std::uint64_t seed = 7;
  bool normalize = true;

  /// Throws std::invalid_argument for zero counts, dim < 2, sigma <= 0,
  /// negative separation, or n_models - 1 > dim (message names the dim needed).
  void validate() const;
};

inline constexpr const char* kSynthEncoderName = "synthetic-gaussian";
inline constexpr const char* kSynthCreatedAt = "1970-01-01T00:00:00Z";

std::string synth_model_id(std::size_t index, std::size_t n_models);
std::string synth_prompt_id(std::size_t index, std::size_t n_prompts);

/// Design means (before sampling and normalization) for the prompt at
/// corpus-wide position `prompt_index`, one per model.
std::vector<std::vector<double>> design_means(const SynthSpec& spec, std::size_t prompt_index);

/// Records in prompt-major, model-minor order; record seeds are 0..k-1.
/// Bit-identical for identical specs, independent of `threads`.
EmbeddingCorpus generate(const SynthSpec& spec, std::size_t threads = 1);

struct MixedBlock {
  SynthSpec spec;
  std::size_t prompt_count = 0;
};

/// Concatenates blocks into one corpus with consecutive prompt ids. Blocks
/// must agree on n_models, dim, and normalize.
EmbeddingCorpus generate_mixed(std::span<const MixedBlock> blocks, std::size_t threads = 1);

}  // namespace attrib
