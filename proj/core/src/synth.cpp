// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "attrib/errors.hpp"
#include "attrib/linalg.hpp"
#include "attrib/parallel.hpp"
#include "attrib/rng.hpp"

namespace attrib {

namespace {

constexpr std::uint64_t kFrameTag = 0xf7;
constexpr std::uint64_t kSampleTag = 0x5a;

std::size_t digits(std::size_t n) {
  std::size_t d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::string padded(char prefix, std::size_t index, std::size_t width) {
  std::string s = std::to_string(index);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return prefix + s;
}

// `count` orthonormal vectors in R^dim from Gram-Schmidt on Gaussian draws.
std::vector<std::vector<double>> random_frame(Rng& rng, std::size_t count, std::size_t dim) {
  std::vector<std::vector<double>> frame;
  frame.reserve(count);
  while (frame.size() < count) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : frame) {
        const double proj = linalg::dot(v, q);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * q[i];
      }
    }
    const double n = linalg::norm(v);
    if (n < 1e-8) continue;
    for (auto& x : v) x /= n;
    frame.push_back(std::move(v));
  }
  return frame;
}

void append_prompt(const SynthSpec& spec, std::size_t prompt_index, std::size_t n_prompts_total,
                   std::vector<GenerationRecord>& out) {
  const auto means = design_means(spec, prompt_index);
  const std::string prompt_id = synth_prompt_id(prompt_index, n_prompts_total);
  for (std::size_t m = 0; m < spec.n_models; ++m) {
    Rng rng = Rng::stream(spec.seed, {prompt_index, m, kSampleTag});
    const std::string model_id = synth_model_id(m, spec.n_models);
    for (std::size_t s = 0; s < spec.k_per_cell; ++s) {
      std::vector<double> x(spec.dim);
      for (std::size_t i = 0; i < spec.dim; ++i) x[i] = means[m][i] + spec.sigma * rng.normal();
      Embedding e(spec.dim);
      const double scale = spec.normalize ? linalg::norm(x) : 1.0;
      if (scale == 0.0) throw DataError("synthetic sample with zero norm cannot be normalized");
      for (std::size_t i = 0; i < spec.dim; ++i) e[i] = static_cast<float>(x[i] / scale);
      out.push_back({prompt_id, model_id, static_cast<std::int64_t>(s), std::move(e)});
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (n_models == 0 || n_prompts == 0 || k_per_cell == 0) {
    throw std::invalid_argument("synth: model, prompt, and per-cell counts must be positive");
  }
  if (dim < 2) throw std::invalid_argument("synth: dim must be at least 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("synth: sigma must be positive");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw std::invalid_argument("synth: separation must be non-negative");
  }
  if (n_models - 1 > dim) {
    throw std::invalid_argument("synth: placing " + std::to_string(n_models) +
                                " equidistant means requires dim >= " + std::to_string(n_models - 1) +
                                " (got " + std::to_string(dim) + ")");
  }
}

std::string synth_model_id(std::size_t index, std::size_t n_models) {
  return padded('m', index, std::max<std::size_t>(2, digits(n_models > 0 ? n_models - 1 : 0)));
}

std::string synth_prompt_id(std::size_t index, std::size_t n_prompts) {
  return padded('p', index, std::max<std::size_t>(3, digits(n_prompts > 0 ? n_prompts - 1 : 0)));
}

std::vector<std::vector<double>> design_means(const SynthSpec& spec, std::size_t prompt_index) {
  spec.validate();
  const std::size_t n = spec.n_models;
  std::vector<std::vector<double>> means(n, std::vector<double>(spec.dim, 0.0));
  if (n < 2) return means;

  Rng rng = Rng::stream(spec.seed, {prompt_index, kFrameTag});
  const auto frame = random_frame(rng, n - 1, spec.dim);
  // Columns of the (n-1) x n Helmert matrix are the vertices of a regular
  // simplex with edge sqrt(2); row r (1-based) is
  // (1, ..., 1, -r, 0, ..., 0) / sqrt(r (r + 1)) with r leading ones.
  const double scale = spec.separation * spec.sigma / std::sqrt(2.0);
  for (std::size_t r = 1; r < n; ++r) {
    const double h = 1.0 / std::sqrt(static_cast<double>(r * (r + 1)));
    const auto& axis = frame[r - 1];
    for (std::size_t j = 0; j <= r; ++j) {
      const double coeff = scale * (j < r ? h : -static_cast<double>(r) * h);
      for (std::size_t i = 0; i < spec.dim; ++i) means[j][i] += coeff * axis[i];
    }
  }
  return means;
}

EmbeddingCorpus generate(const SynthSpec& spec, std::size_t threads) {
  const MixedBlock block{spec, spec.n_prompts};
  return generate_mixed(std::span<const MixedBlock>(&block, 1), threads);
}

EmbeddingCorpus generate_mixed(std::span<const MixedBlock> blocks, std::size_t threads) {
  if (blocks.empty()) throw std::invalid_argument("generate_mixed: no blocks");
  const SynthSpec& first = blocks.front().spec;
  std::size_t total_prompts = 0;
  for (const auto& b : blocks) {
    b.spec.validate();
    if (b.prompt_count == 0) throw std::invalid_argument("generate_mixed: block with zero prompts");
    if (b.spec.n_models != first.n_models || b.spec.dim != first.dim || b.spec.normalize != first.normalize) {
      throw std::invalid_argument("generate_mixed: blocks disagree on model set, dim, or normalization");
    }
    total_prompts += b.prompt_count;
  }

  // (block, prompt position) for every corpus-wide prompt index.
  std::vector<const SynthSpec*> spec_of(total_prompts);
  for (std::size_t b = 0, p = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].prompt_count; ++i) spec_of[p++] = &blocks[b].spec;
  }

  std::vector<std::vector<GenerationRecord>> per_prompt(total_prompts);
  parallel_for(total_prompts, threads,
               [&](std::size_t p) { append_prompt(*spec_of[p], p, total_prompts, per_prompt[p]); });

  std::vector<GenerationRecord> records;
  for (auto& chunk : per_prompt) {
    for (auto& r : chunk) records.push_back(std::move(r));
  }

  CorpusManifest manifest;
  manifest.encoder_name = kSynthEncoderName;
  manifest.dim = first.dim;
  manifest.normalized = first.normalize;
  manifest.created_at = kSynthCreatedAt;
  for (std::size_t m = 0; m < first.n_models; ++m) manifest.model_ids.push_back(synth_model_id(m, first.n_models));
  for (std::size_t p = 0; p < total_prompts; ++p) manifest.prompt_ids.push_back(synth_prompt_id(p, total_prompts));
  return EmbeddingCorpus(std::move(records), std::move(manifest));
}

}  // namespace attrib
