// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace attrib::report {

using nlohmann::json;

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cap_label(double cap) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", cap * 100.0);
  return std::string("tpr@") + buf + "%";
}

json to_json(const RecordKey& key) {
  return json{{"prompt_id", key.prompt_id}, {"model_id", key.model_id}, {"seed", key.seed}};
}

json to_json(const AttributionRanking& ranking) {
  json entries = json::array();
  for (const auto& e : ranking.entries) entries.push_back({{"model_id", e.model_id}, {"distance", e.distance}});
  return json{{"query_key", ranking.query_key ? to_json(*ranking.query_key) : json(nullptr)},
              {"entries", std::move(entries)},
              {"predicted", ranking.predicted}};
}

json to_json(const SeparabilityReport& report, bool per_model) {
  json j{{"prompt_id", report.prompt_id},
         {"score", report.score},
         {"tau", report.tau},
         {"separable_count", report.separable_count},
         {"model_count", report.model_count}};
  if (per_model) {
    json frac = json::object();
    for (const auto& [model, f] : report.per_model_frac) {
      frac[model] = {{"frac", f}, {"separable", report.separable.at(model)}};
    }
    j["per_model"] = std::move(frac);
  }
  return j;
}

json to_json(const TargetReport& row) {
  json ops = json::array();
  for (const auto& op : row.operating_points) {
    ops.push_back({{"fpr_cap", op.fpr_cap}, {"tpr", op.tpr}, {"fpr", op.fpr},
                   {"threshold", std::isfinite(op.threshold) ? json(op.threshold) : json("inf")}});
  }
  return json{{"model", row.model},         {"accuracy", row.accuracy},   {"roc_auc", row.roc_auc},
              {"positives", row.positives}, {"negatives", row.negatives}, {"operating_points", std::move(ops)}};
}

json to_json(const AccuracyCurve& curve) {
  json per_k = json::array();
  for (std::size_t ki = 0; ki < curve.k_values.size(); ++ki) {
    json depths = json::array();
    for (std::size_t d = 0; d < curve.depth; ++d) {
      depths.push_back({{"depth", d + 1}, {"mean", curve.per_k[ki][d].mean}, {"stddev", curve.per_k[ki][d].stddev}});
    }
    per_k.push_back({{"k", curve.k_values[ki]}, {"topk", std::move(depths)}});
  }
  return json{{"repeats", curve.repeats},
              {"queries_per_repeat", curve.queries_per_repeat},
              {"depth", curve.depth},
              {"per_k", std::move(per_k)}};
}

json to_json(const ConfusionMatrix& cm) {
  return json{{"labels", cm.labels}, {"counts", cm.counts}, {"rates", cm.rates()}};
}

json to_json(const CorrelationReport& report) {
  json points = json::array();
  for (const auto& p : report.points) points.push_back({{"prompt_id", p.prompt_id}, {"score", p.score}, {"top1", p.top1}});
  return json{{"points", std::move(points)},
              {"spearman", report.spearman ? json(*report.spearman) : json(nullptr)},
              {"degenerate", report.degenerate}};
}

json to_json(const EvalConfig& c) {
  return json{{"k_values", c.k_values},
              {"k_rank_max", c.k_rank_max},
              {"repeats", c.repeats},
              {"split_seed", c.split_seed},
              {"tau", c.tau},
              {"metric", std::string(to_string(c.metric))},
              {"renormalize_centroid", c.renormalize_centroid},
              {"fpr_caps", c.fpr_caps},
              {"trials", c.trials},
              {"prompts", c.prompts},
              {"attack_prompts", c.attack_prompts},
              {"fit_size", c.fit_size},
              {"quantile", c.quantile}};
}

std::string separability_csv(std::span<const SeparabilityReport> reports, std::span<const std::string> models) {
  std::string out = "prompt_id,score";
  for (const auto& m : models) out += "," + m;
  out += "\n";
  for (const auto& r : reports) {
    out += r.prompt_id + "," + number(r.score);
    for (const auto& m : models) {
      const auto it = r.per_model_frac.find(m);
      out += ",";
      if (it != r.per_model_frac.end()) out += number(it->second);
    }
    out += "\n";
  }
  return out;
}

std::string target_rows_csv(std::span<const TargetReport> rows, std::span<const double> caps) {
  std::string out = "model,accuracy,roc_auc";
  for (const double c : caps) out += "," + cap_label(c);
  out += "\n";
  for (const auto& row : rows) {
    out += row.model + "," + number(row.accuracy) + "," + number(row.roc_auc);
    for (const auto& op : row.operating_points) out += "," + number(op.tpr);
    out += "\n";
  }
  return out;
}

std::string accuracy_csv(const AccuracyCurve& curve) {
  std::string out = "k,depth,mean,stddev\n";
  for (std::size_t ki = 0; ki < curve.k_values.size(); ++ki) {
    for (std::size_t d = 0; d < curve.depth; ++d) {
      out += std::to_string(curve.k_values[ki]) + "," + std::to_string(d + 1) + "," +
             number(curve.per_k[ki][d].mean) + "," + number(curve.per_k[ki][d].stddev) + "\n";
    }
  }
  return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "true\\predicted";
  for (const auto& l : cm.labels) out += "," + l;
  out += "\n";
  for (std::size_t a = 0; a < cm.labels.size(); ++a) {
    out += cm.labels[a];
    for (const auto c : cm.counts[a]) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

std::string correlation_csv(const CorrelationReport& report) {
  std::string out = "prompt_id,score,top1\n";
  for (const auto& p : report.points) out += p.prompt_id + "," + number(p.score) + "," + number(p.top1) + "\n";
  return out;
}

EvalConfig eval_config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("eval config must be a JSON object");
  static const std::set<std::string> known{"k_values", "k_rank_max", "repeats",  "split_seed",
                                           "tau",      "metric",     "renormalize_centroid",
                                           "fpr_caps", "trials",     "prompts",  "attack_prompts",
                                           "fit_size", "quantile"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("unknown eval config field '" + key + "'");
  }
  EvalConfig c;
  try {
    if (j.contains("k_values")) c.k_values = j.at("k_values").get<std::vector<std::size_t>>();
    if (j.contains("k_rank_max")) c.k_rank_max = j.at("k_rank_max").get<std::size_t>();
    if (j.contains("repeats")) c.repeats = j.at("repeats").get<std::size_t>();
    if (j.contains("split_seed")) c.split_seed = j.at("split_seed").get<std::uint64_t>();
    if (j.contains("tau")) c.tau = j.at("tau").get<double>();
    if (j.contains("metric")) c.metric = parse_metric(j.at("metric").get<std::string>());
    if (j.contains("renormalize_centroid")) c.renormalize_centroid = j.at("renormalize_centroid").get<bool>();
    if (j.contains("fpr_caps")) c.fpr_caps = j.at("fpr_caps").get<std::vector<double>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("prompts")) c.prompts = j.at("prompts").get<std::vector<std::string>>();
    if (j.contains("attack_prompts")) c.attack_prompts = j.at("attack_prompts").get<std::size_t>();
    if (j.contains("fit_size")) c.fit_size = j.at("fit_size").get<std::size_t>();
    if (j.contains("quantile")) c.quantile = j.at("quantile").get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid eval config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace attrib::report
