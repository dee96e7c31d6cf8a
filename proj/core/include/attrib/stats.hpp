// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

namespace attrib::stats {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> xs);
/// 1-based ranks with ties given their average rank.
std::vector<double> average_ranks(std::span<const double> xs);
/// Pearson correlation; nullopt when either input has zero variance or
/// fewer than 2 points.
std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys);
/// Spearman rank correlation (Pearson on average ranks).
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace attrib::stats
