// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace attrib {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a 64-bit hash; a platform-independent way to turn ids into tags.
std::uint64_t hash_id(std::string_view id);

/// Seeded random source with a fully specified output sequence.
///
/// Engine: std::mt19937_64, whose output for a given seed is fixed by the
/// C++ standard. Distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined:
///   - uniform():  top 53 bits of one engine draw, scaled to [0, 1)
///   - normal():   Box-Muller on (1 - uniform(), uniform()), both outputs used
///   - below(n):   rejection sampling on the top bits, unbiased
/// Streams are split by hashing a path of tags into the seed with
/// SplitMix64, so every (seed, path) pair names an independent stream and
/// parallel work can draw from per-task streams deterministically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for `seed` refined by each tag in `path`, in order.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// k distinct indices drawn uniformly from [0, n), returned ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace attrib
