// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "attrib/corpus.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "attrib/errors.hpp"
#include "attrib/linalg.hpp"

namespace attrib {

std::string RecordKey::to_string() const {
  return "(" + prompt_id + ", " + model_id + ", " + std::to_string(seed) + ")";
}

namespace {

void check_id_list(const std::vector<std::string>& ids, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw DataError(std::string("manifest ") + what + " lists '" + id + "' twice");
    }
  }
}

}  // namespace

EmbeddingCorpus::EmbeddingCorpus(std::vector<GenerationRecord> records, CorpusManifest manifest)
    : records_(std::move(records)), manifest_(std::move(manifest)) {
  validate_and_index();
}

EmbeddingCorpus EmbeddingCorpus::from_records(std::vector<GenerationRecord> records,
                                              std::string encoder_name, bool normalized,
                                              std::string created_at) {
  if (records.empty()) throw DataError("empty corpus");
  CorpusManifest manifest;
  manifest.encoder_name = std::move(encoder_name);
  manifest.dim = records.front().embedding.size();
  manifest.normalized = normalized;
  manifest.created_at = std::move(created_at);
  std::set<std::string_view> models;
  std::set<std::string_view> prompts;
  for (const auto& r : records) {
    if (models.insert(r.model_id).second) manifest.model_ids.push_back(r.model_id);
    if (prompts.insert(r.prompt_id).second) manifest.prompt_ids.push_back(r.prompt_id);
  }
  return EmbeddingCorpus(std::move(records), std::move(manifest));
}

void EmbeddingCorpus::validate_and_index() {
  if (records_.empty()) throw DataError("empty corpus");
  if (manifest_.dim == 0) throw DataError("corpus dimension must be positive");
  check_id_list(manifest_.model_ids, "model_ids");
  check_id_list(manifest_.prompt_ids, "prompt_ids");
  const std::set<std::string_view> models(manifest_.model_ids.begin(), manifest_.model_ids.end());
  const std::set<std::string_view> prompts(manifest_.prompt_ids.begin(), manifest_.prompt_ids.end());

  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.embedding.size() != manifest_.dim) {
      throw DataError("record " + r.key().to_string() + ": dimension " +
                      std::to_string(r.embedding.size()) + " does not match corpus dimension " +
                      std::to_string(manifest_.dim));
    }
    if (!linalg::all_finite(r.embedding)) {
      throw DataError("record " + r.key().to_string() + ": non-finite embedding component");
    }
    if (!models.contains(r.model_id)) {
      throw DataError("record " + r.key().to_string() + ": model_id missing from manifest");
    }
    if (!prompts.contains(r.prompt_id)) {
      throw DataError("record " + r.key().to_string() + ": prompt_id missing from manifest");
    }
    if (manifest_.normalized) {
      const double n = linalg::norm(r.embedding);
      if (std::abs(n - 1.0) > kUnitNormTolerance) {
        throw DataError("record " + r.key().to_string() + ": corpus is flagged normalized but norm is " +
                        std::to_string(n));
      }
    }
    if (!by_key_.emplace(r.key(), i).second) {
      throw DataError("duplicate record " + r.key().to_string());
    }
    auto& by_model = index_[r.prompt_id];
    auto it = by_model.find(r.model_id);
    if (it == by_model.end()) it = by_model.emplace(r.model_id, std::vector<std::size_t>{}).first;
    it->second.push_back(i);
  }
}

bool EmbeddingCorpus::has_prompt(std::string_view prompt_id) const {
  return index_.find(prompt_id) != index_.end();
}

bool EmbeddingCorpus::has_model(std::string_view model_id) const {
  for (const auto& m : manifest_.model_ids) {
    if (m == model_id) return true;
  }
  return false;
}

std::span<const std::size_t> EmbeddingCorpus::cell(std::string_view prompt_id,
                                                   std::string_view model_id) const {
  const auto p = index_.find(prompt_id);
  if (p == index_.end()) return {};
  const auto m = p->second.find(model_id);
  if (m == p->second.end()) return {};
  return m->second;
}

std::vector<std::string> EmbeddingCorpus::models_for_prompt(std::string_view prompt_id) const {
  std::vector<std::string> out;
  const auto p = index_.find(prompt_id);
  if (p == index_.end()) return out;
  for (const auto& m : manifest_.model_ids) {
    if (p->second.find(m) != p->second.end()) out.push_back(m);
  }
  return out;
}

std::size_t EmbeddingCorpus::find(const RecordKey& key) const {
  const auto it = by_key_.find(key);
  return it == by_key_.end() ? records_.size() : it->second;
}

Embedding normalize_embedding(std::span<const float> x) {
  const double n = linalg::norm(x);
  if (n == 0.0) throw DataError("cannot normalize a zero vector");
  Embedding out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<float>(static_cast<double>(x[i]) / n);
  }
  return out;
}

EmbeddingCorpus normalize(const EmbeddingCorpus& corpus) {
  std::vector<GenerationRecord> records = corpus.records();
  for (auto& r : records) {
    if (linalg::norm(r.embedding) == 0.0) {
      throw DataError("record " + r.key().to_string() + ": zero-norm embedding cannot be normalized");
    }
    r.embedding = normalize_embedding(r.embedding);
  }
  CorpusManifest manifest = corpus.manifest();
  manifest.normalized = true;
  return EmbeddingCorpus(std::move(records), std::move(manifest));
}

}  // namespace attrib
