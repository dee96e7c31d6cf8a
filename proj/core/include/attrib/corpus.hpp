// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace attrib {

/// One image embedding. Components are stored as 32-bit floats (the on-disk
/// precision); every distance or similarity over them is computed in double.
using Embedding = std::vector<float>;

/// Tolerance on |1 - ||x||| for vectors flagged as normalized.
inline constexpr double kUnitNormTolerance = 1e-6;

struct RecordKey {
  std::string prompt_id;
  std::string model_id;
  std::int64_t seed = 0;

  auto operator<=>(const RecordKey&) const = default;
  /// "(prompt_id, model_id, seed)" for diagnostics.
  std::string to_string() const;
};

struct GenerationRecord {
  std::string prompt_id;
  std::string model_id;
  std::int64_t seed = 0;
  Embedding embedding;

  RecordKey key() const { return {prompt_id, model_id, seed}; }
  bool operator==(const GenerationRecord&) const = default;
};

struct CorpusManifest {
  std::string encoder_name = "unknown";
  std::size_t dim = 0;
  std::vector<std::string> model_ids;   // first-appearance order
  std::vector<std::string> prompt_ids;  // first-appearance order
  bool normalized = false;
  std::string created_at;               // ISO-8601 UTC

  bool operator==(const CorpusManifest&) const = default;
};

std::string manifest_to_json(const CorpusManifest& manifest);
/// Throws DataError on malformed JSON or missing fields.
CorpusManifest manifest_from_json(std::string_view json);

/// An immutable, validated set of generation records indexed by
/// (prompt_id, model_id). Every constructor validates:
///   - at least one record, and every embedding has the corpus dimension
///   - every component is finite
///   - (prompt_id, model_id, seed) keys are unique
///   - the manifest id lists are duplicate-free and cover every record
///   - if the manifest says `normalized`, every embedding has unit norm
/// "Modifying" operations such as normalize() return a new corpus.
class EmbeddingCorpus {
 public:
  EmbeddingCorpus(std::vector<GenerationRecord> records, CorpusManifest manifest);

  /// Builds a corpus whose manifest is inferred from the records.
  static EmbeddingCorpus from_records(std::vector<GenerationRecord> records,
                                      std::string encoder_name = "unknown",
                                      bool normalized = false,
                                      std::string created_at = {});

  const std::vector<GenerationRecord>& records() const { return records_; }
  const GenerationRecord& record(std::size_t i) const { return records_.at(i); }
  std::size_t size() const { return records_.size(); }
  std::size_t dim() const { return manifest_.dim; }
  bool normalized() const { return manifest_.normalized; }
  const CorpusManifest& manifest() const { return manifest_; }
  const std::vector<std::string>& model_ids() const { return manifest_.model_ids; }
  const std::vector<std::string>& prompt_ids() const { return manifest_.prompt_ids; }

  bool has_prompt(std::string_view prompt_id) const;
  bool has_model(std::string_view model_id) const;

  /// Record indices for one (prompt, model) cell in corpus order; empty if
  /// the cell has no records.
  std::span<const std::size_t> cell(std::string_view prompt_id, std::string_view model_id) const;

  /// Models with at least one record for the prompt, in manifest order.
  std::vector<std::string> models_for_prompt(std::string_view prompt_id) const;

  /// Index of the record with this key, or size() if absent.
  std::size_t find(const RecordKey& key) const;

  bool operator==(const EmbeddingCorpus& other) const {
    return manifest_ == other.manifest_ && records_ == other.records_;
  }

 private:
  using CellIndex = std::map<std::string, std::map<std::string, std::vector<std::size_t>, std::less<>>, std::less<>>;

  void validate_and_index();

  std::vector<GenerationRecord> records_;
  CorpusManifest manifest_;
  CellIndex index_;
  std::map<RecordKey, std::size_t> by_key_;
};

/// Returns x / ||x||; throws DataError for a zero vector.
Embedding normalize_embedding(std::span<const float> x);

/// New corpus with every embedding scaled to unit L2 norm and the manifest
/// flagged `normalized`. A zero vector is reported by its record key.
EmbeddingCorpus normalize(const EmbeddingCorpus& corpus);

// ---------------------------------------------------------------------------
// Persistence
//
// JSONL: one object per line,
//   {"prompt_id": str, "model_id": str, "seed": int, "embedding": [float, ...]}
// with an optional sidecar `<stem>.manifest.json` holding the manifest.
//
// Binary (all integers little-endian):
//   "ATK1" | u16 version | u32 dim | u64 record_count
//   | u32 manifest_len | manifest JSON (UTF-8)
//   | record_count x ( u16 len | prompt_id | u16 len | model_id
//                      | i64 seed | dim x f32 )
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kBinaryFormatVersion = 1;

/// Throws DataError naming the 1-based line for malformed or inconsistent
/// lines, IoError if the file cannot be read.
EmbeddingCorpus load_jsonl(const std::filesystem::path& path);
/// Writes the records and the sidecar manifest next to them.
void write_jsonl(const EmbeddingCorpus& corpus, const std::filesystem::path& path);

void write_binary(const EmbeddingCorpus& corpus, const std::filesystem::path& path);
/// Throws IoError on bad magic, unsupported version, or truncation (with the
/// expected and actual byte counts).
EmbeddingCorpus load_binary(const std::filesystem::path& path);

/// Sidecar location for a JSONL corpus: "dir/name.jsonl" -> "dir/name.manifest.json".
std::filesystem::path manifest_sidecar_path(const std::filesystem::path& jsonl_path);

/// Loads by content: files starting with the binary magic go through
/// load_binary, anything else through load_jsonl.
EmbeddingCorpus load_corpus(const std::filesystem::path& path);
/// Saves as JSONL when the extension is .jsonl, binary otherwise.
void save_corpus(const EmbeddingCorpus& corpus, const std::filesystem::path& path);

}  // namespace attrib
