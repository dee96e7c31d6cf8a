// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <ranges>
#include <vector>

// Small dense-vector kernels. Inputs may be float or double ranges; all
// accumulation happens in double.
namespace attrib::linalg {

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double dot(const A& a, const B& b) {
  double acc = 0.0;
  const auto n = std::ranges::size(a);
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double squared_distance(const A& a, const B& b) {
  double acc = 0.0;
  const auto n = std::ranges::size(a);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

template <std::ranges::random_access_range A>
double norm(const A& a) {
  return std::sqrt(dot(a, a));
}

/// Cosine similarity; returns NaN when either vector has zero norm so the
/// caller can decide how to report it.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double cosine(const A& a, const B& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return std::nan("");
  return dot(a, b) / (na * nb);
}

template <std::ranges::random_access_range A>
bool all_finite(const A& a) {
  for (const auto& v : a) {
    if (!std::isfinite(static_cast<double>(v))) return false;
  }
  return true;
}

}  // namespace attrib::linalg
