// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "attrib/corpus.hpp"
#include "attrib/errors.hpp"
#include "attrib/linalg.hpp"

namespace attrib {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'K', '1'};

json manifest_json(const CorpusManifest& m) {
  return json{{"encoder_name", m.encoder_name}, {"dim", m.dim},
              {"model_ids", m.model_ids},       {"prompt_ids", m.prompt_ids},
              {"normalized", m.normalized},     {"created_at", m.created_at}};
}

// Fills id lists that a hand-written or partial manifest left empty.
void complete_manifest(CorpusManifest& m, const std::vector<GenerationRecord>& records) {
  if (m.model_ids.empty()) {
    std::set<std::string_view> seen;
    for (const auto& r : records) {
      if (seen.insert(r.model_id).second) m.model_ids.push_back(r.model_id);
    }
  }
  if (m.prompt_ids.empty()) {
    std::set<std::string_view> seen;
    for (const auto& r : records) {
      if (seen.insert(r.prompt_id).second) m.prompt_ids.push_back(r.prompt_id);
    }
  }
}

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_mtime_iso(const fs::path& path) {
  std::error_code ec;
  const auto ft = fs::last_write_time(path, ec);
  if (ec) return {};
  return iso8601_utc(std::chrono::time_point_cast<std::chrono::system_clock::duration>(
      std::chrono::file_clock::to_sys(ft)));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return data;
}

void write_file(const fs::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

// ---- JSONL ----------------------------------------------------------------

GenerationRecord parse_record(const std::string& line, std::size_t line_no) {
  const auto where = [line_no] { return "line " + std::to_string(line_no) + ": "; };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(where() + "malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw DataError(where() + "expected a JSON object");

  GenerationRecord r;
  const auto field = [&](const char* name) -> const json& {
    const auto it = j.find(name);
    if (it == j.end()) throw DataError(where() + "missing field '" + name + "'");
    return *it;
  };
  const json& prompt = field("prompt_id");
  const json& model = field("model_id");
  const json& seed = field("seed");
  const json& emb = field("embedding");
  if (!prompt.is_string()) throw DataError(where() + "'prompt_id' must be a string");
  if (!model.is_string()) throw DataError(where() + "'model_id' must be a string");
  if (!seed.is_number_integer()) throw DataError(where() + "'seed' must be an integer");
  if (!emb.is_array() || emb.empty()) throw DataError(where() + "'embedding' must be a non-empty array");

  r.prompt_id = prompt.get<std::string>();
  r.model_id = model.get<std::string>();
  r.seed = seed.get<std::int64_t>();
  r.embedding.reserve(emb.size());
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (!emb[i].is_number()) {
      throw DataError(where() + "embedding component " + std::to_string(i) + " is not a number");
    }
    const float v = static_cast<float>(emb[i].get<double>());
    if (!std::isfinite(v)) {
      throw DataError(where() + "non-finite embedding component at index " + std::to_string(i));
    }
    r.embedding.push_back(v);
  }
  return r;
}

// ---- binary ---------------------------------------------------------------

class ByteWriter {
 public:
  void bytes(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  template <class T>
  void le(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<char>(u & 0xff));
      u = static_cast<U>(u >> 8);
    }
  }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }
  void str16(const std::string& s, const char* what) {
    if (s.size() > 0xffff) throw DataError(std::string(what) + " longer than 65535 bytes");
    le(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) {
      throw IoError("truncated: expected at least " + std::to_string(pos_ + n) + " bytes, got " +
                    std::to_string(data_.size()));
    }
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  template <class T>
  T le() {
    need(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  float f32() { return std::bit_cast<float>(le<std::uint32_t>()); }
  std::string str16() {
    const auto n = le<std::uint16_t>();
    return std::string(bytes(n));
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string manifest_to_json(const CorpusManifest& manifest) {
  return manifest_json(manifest).dump(2);
}

CorpusManifest manifest_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw DataError("manifest must be a JSON object");
  CorpusManifest m;
  try {
    if (!j.contains("dim")) throw DataError("manifest is missing 'dim'");
    m.dim = j.at("dim").get<std::size_t>();
    m.encoder_name = j.value("encoder_name", std::string("unknown"));
    m.model_ids = j.value("model_ids", std::vector<std::string>{});
    m.prompt_ids = j.value("prompt_ids", std::vector<std::string>{});
    m.normalized = j.value("normalized", false);
    m.created_at = j.value("created_at", std::string{});
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid manifest field (") + e.what() + ")");
  }
  return m;
}

fs::path manifest_sidecar_path(const fs::path& jsonl_path) {
  fs::path p = jsonl_path;
  p.replace_extension();
  p += ".manifest.json";
  return p;
}

EmbeddingCorpus load_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::vector<GenerationRecord> records;
  std::map<RecordKey, std::size_t> first_line;
  std::size_t dim = 0;
  std::size_t dim_line = 0;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    GenerationRecord r = parse_record(line, line_no);
    if (dim == 0) {
      dim = r.embedding.size();
      dim_line = line_no;
    } else if (r.embedding.size() != dim) {
      throw DataError("line " + std::to_string(line_no) + ": dimension " +
                      std::to_string(r.embedding.size()) + " does not match corpus dimension " +
                      std::to_string(dim) + " (set by line " + std::to_string(dim_line) + ")");
    }
    const auto [it, inserted] = first_line.emplace(r.key(), line_no);
    if (!inserted) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate record " + r.key().to_string() +
                      " (first on line " + std::to_string(it->second) + ")");
    }
    records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  if (records.empty()) throw DataError("empty corpus: '" + path.string() + "' has no records");

  CorpusManifest manifest;
  const fs::path sidecar = manifest_sidecar_path(path);
  if (fs::exists(sidecar)) {
    manifest = manifest_from_json(read_file(sidecar));
    if (manifest.dim != dim) {
      throw DataError("manifest '" + sidecar.string() + "' declares dim " + std::to_string(manifest.dim) +
                      " but records have dim " + std::to_string(dim));
    }
  } else {
    manifest.dim = dim;
    manifest.created_at = file_mtime_iso(path);
    // Without a manifest, the flag is set iff every record is already unit norm.
    manifest.normalized = std::all_of(records.begin(), records.end(), [](const GenerationRecord& rec) {
      return std::abs(linalg::norm(rec.embedding) - 1.0) <= kUnitNormTolerance;
    });
  }
  complete_manifest(manifest, records);
  return EmbeddingCorpus(std::move(records), std::move(manifest));
}

void write_jsonl(const EmbeddingCorpus& corpus, const fs::path& path) {
  std::string out;
  for (const auto& r : corpus.records()) {
    json j;
    j["prompt_id"] = r.prompt_id;
    j["model_id"] = r.model_id;
    j["seed"] = r.seed;
    json emb = json::array();
    for (const float v : r.embedding) emb.push_back(static_cast<double>(v));
    j["embedding"] = std::move(emb);
    out += j.dump();
    out += '\n';
  }
  write_file(path, out);
  write_file(manifest_sidecar_path(path), manifest_to_json(corpus.manifest()) + "\n");
}

void write_binary(const EmbeddingCorpus& corpus, const fs::path& path) {
  ByteWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.le(kBinaryFormatVersion);
  w.le(static_cast<std::uint32_t>(corpus.dim()));
  w.le(static_cast<std::uint64_t>(corpus.size()));
  const std::string manifest = manifest_json(corpus.manifest()).dump();
  w.le(static_cast<std::uint32_t>(manifest.size()));
  w.bytes(manifest.data(), manifest.size());
  for (const auto& r : corpus.records()) {
    w.str16(r.prompt_id, "prompt_id");
    w.str16(r.model_id, "model_id");
    w.le(r.seed);
    for (const float v : r.embedding) w.f32(v);
  }
  write_file(path, w.data());
}

EmbeddingCorpus load_binary(const fs::path& path) {
  const std::string data = read_file(path);
  ByteReader r(data);
  if (data.size() < kMagic.size() || std::memcmp(data.data(), kMagic.data(), kMagic.size()) != 0) {
    throw IoError("bad magic in '" + path.string() + "' (expected ATK1)");
  }
  r.bytes(kMagic.size());
  const auto version = r.le<std::uint16_t>();
  if (version != kBinaryFormatVersion) {
    throw IoError("unsupported format version " + std::to_string(version) + " (expected " +
                  std::to_string(kBinaryFormatVersion) + ")");
  }
  const auto dim = r.le<std::uint32_t>();
  const auto count = r.le<std::uint64_t>();
  const auto manifest_len = r.le<std::uint32_t>();
  CorpusManifest manifest = manifest_from_json(r.bytes(manifest_len));
  if (manifest.dim != dim) {
    throw DataError("manifest dim " + std::to_string(manifest.dim) + " disagrees with header dim " +
                    std::to_string(dim));
  }

  std::vector<GenerationRecord> records;
  // Every record takes at least 12 + 4*dim bytes; bound the reservation so a
  // corrupt count cannot trigger a huge allocation.
  const std::size_t min_record = 12 + 4 * static_cast<std::size_t>(dim);
  records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, r.remaining() / min_record + 1)));
  for (std::uint64_t i = 0; i < count; ++i) {
    GenerationRecord rec;
    rec.prompt_id = r.str16();
    rec.model_id = r.str16();
    rec.seed = r.le<std::int64_t>();
    r.need(4 * static_cast<std::size_t>(dim));
    rec.embedding.resize(dim);
    for (auto& v : rec.embedding) v = r.f32();
    records.push_back(std::move(rec));
  }
  if (r.remaining() != 0) {
    throw IoError("'" + path.string() + "' has " + std::to_string(r.remaining()) +
                  " trailing bytes after the last record");
  }
  complete_manifest(manifest, records);
  return EmbeddingCorpus(std::move(records), std::move(manifest));
}

EmbeddingCorpus load_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  if (in.gcount() == 4 && head == kMagic) return load_binary(path);
  return load_jsonl(path);
}

void save_corpus(const EmbeddingCorpus& corpus, const fs::path& path) {
  if (path.extension() == ".jsonl") {
    write_jsonl(corpus, path);
  } else {
    write_binary(corpus, path);
  }
}

}  // namespace attrib
