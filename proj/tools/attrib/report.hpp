// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "attrib/attrib.hpp"

// Machine-readable renderings of library results. Numbers in CSV use the
// shortest round-trip decimal form so identical inputs give identical bytes.
namespace attrib::report {

std::string number(double v);
/// Column label for an FPR cap: 0.02 -> "tpr@2%".
std::string cap_label(double cap);

nlohmann::json to_json(const RecordKey& key);
nlohmann::json to_json(const AttributionRanking& ranking);
nlohmann::json to_json(const SeparabilityReport& report, bool per_model);
nlohmann::json to_json(const TargetReport& row);
nlohmann::json to_json(const AccuracyCurve& curve);
nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const CorrelationReport& report);
nlohmann::json to_json(const EvalConfig& config);

/// Columns: prompt_id, score, then one frac column per model in `models`.
std::string separability_csv(std::span<const SeparabilityReport> reports, std::span<const std::string> models);
/// Columns: model, accuracy, roc_auc, tpr@<cap>...
std::string target_rows_csv(std::span<const TargetReport> rows, std::span<const double> caps);
/// Columns: k, depth, mean, stddev (depth 1 = top-1).
std::string accuracy_csv(const AccuracyCurve& curve);
/// Header row of labels; one row per true model of counts.
std::string confusion_csv(const ConfusionMatrix& cm);
/// Columns: prompt_id, score, top1.
std::string correlation_csv(const CorrelationReport& report);

/// Parses an EvalConfig from JSON with the same field names; unknown
/// fields and wrong types throw std::invalid_argument.
EvalConfig eval_config_from_json(const nlohmann::json& j);

}  // namespace attrib::report
