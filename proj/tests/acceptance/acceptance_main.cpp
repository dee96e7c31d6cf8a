// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Each check prints one PASS/FAIL line with
// the measured quantity; the process exits non-zero if any check fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "attrib/attrib.hpp"
#include "cli.hpp"
#include "oracle/brute_force.hpp"
#include "oracle/instances.hpp"

using namespace attrib;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

SynthSpec reference_shape(double separation) {
  SynthSpec s;
  s.n_models = 19;
  s.n_prompts = 100;
  s.k_per_cell = 21;  // k = 20 references plus the held-out query
  s.dim = 64;
  s.separation = separation;
  s.seed = 7;
  return s;
}

EvalConfig single_k(std::size_t k) {
  EvalConfig c;
  c.k_values = {k};
  c.repeats = 1;
  c.split_seed = 1;
  return c;
}

Outcome random_baseline() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = generate(reference_shape(0.0), 1);
  const auto curve = topk_accuracy(corpus, single_k(20));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double p = 1.0 / 19.0;
  const double n = static_cast<double>(curve.queries_per_repeat);
  const double se = std::sqrt(p * (1.0 - p) / n);
  const double top1 = curve.at(20)[0].mean;
  const bool ok = std::abs(top1 - p) <= 3.0 * se && secs < 60.0;
  return {ok, fmt("top1=%.4f chance=%.4f 3SE=%.4f queries=%.0f time=%.1fs", top1, p, 3.0 * se, n, secs)};
}

Outcome perfect_separation() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = generate(reference_shape(50.0), 1);
  const double top1 = topk_accuracy(corpus, single_k(20)).at(20)[0].mean;
  std::size_t imperfect_prompts = 0;
  for (const auto& r : rank_prompts(corpus)) imperfect_prompts += r.score == 1.0 ? 0 : 1;
  std::size_t imperfect_rows = 0;
  for (const auto& row : fixed_target_sweep_all(corpus)) {
    bool perfect = row.accuracy == 1.0 && row.roc_auc == 1.0;
    for (const auto& op : row.operating_points) perfect = perfect && op.tpr == 1.0;
    imperfect_rows += perfect ? 0 : 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = top1 == 1.0 && imperfect_prompts == 0 && imperfect_rows == 0 && secs < 60.0;
  return {ok, fmt("top1=%.4f prompts_below_D1=%zu ovr_rows_below_1=%zu time=%.1fs", top1, imperfect_prompts,
                  imperfect_rows, secs)};
}

Outcome k_sweep() {
  SynthSpec s = reference_shape(2.0);
  s.n_prompts = 20;
  s.k_per_cell = 16;
  const auto corpus = generate(s, 1);
  EvalConfig c;
  c.k_values = {1, 5, 10, 15};
  c.repeats = 20;
  c.split_seed = 2;
  const auto curve = topk_accuracy(corpus, c);
  const auto& k1 = curve.at(1)[0];
  const auto& k15 = curve.at(15)[0];
  const double pooled = std::sqrt((k1.stddev * k1.stddev + k15.stddev * k15.stddev) / 20.0);
  const double gap = k15.mean - k1.mean;
  return {gap > 2.0 * pooled,
          fmt("top1(k=1)=%.4f top1(k=15)=%.4f gap=%.4f 2SE=%.4f", k1.mean, k15.mean, gap, 2.0 * pooled)};
}

Outcome prompt_attack() {
  // D = 1.0 saturates near separation 6 while attack accuracy is still ~0.98
  // there, so the attack corpus is clearly separated.
  SynthSpec s;
  s.separation = 10.0;
  s.n_prompts = 40;
  s.k_per_cell = 30;
  const auto corpus = generate(s, 1);
  const auto prompts = select_separable_prompts(corpus, kDefaultTau, 5, 3);
  if (prompts.size() < 5) return {false, fmt("only %zu prompts with D=1.0", prompts.size())};
  const auto r = prompt_controlled_attack(corpus, prompts, 100, 3);
  return {r.accuracy >= 0.99, fmt("accuracy=%.4f correct=%zu trials=%zu", r.accuracy, r.correct, r.trials)};
}

Outcome oracle_equivalence() {
  Rng rng(2026);
  std::size_t rank_mismatch = 0;
  std::size_t purity_mismatch = 0;
  std::size_t purity_checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto in = oracle::random_instance(rng, t % 2 == 0);
    const auto got = rank_models(in.query, in.clusters);
    const auto want = oracle::rank(in.query, oracle::centroids(in));
    bool same = got.entries.size() == want.size() && got.predicted == want.front().first;
    for (std::size_t i = 0; same && i < want.size(); ++i) {
      same = got.entries[i].model_id == want[i].first && got.entries[i].distance == want[i].second;
    }
    rank_mismatch += same ? 0 : 1;
    if (in.points.size() >= 2) {
      ++purity_checked;
      purity_mismatch += nn_purity(in.clusters) == oracle::purity(in.points) ? 0 : 1;
    }
  }
  return {rank_mismatch == 0 && purity_mismatch == 0,
          fmt("rank mismatches=%zu/1000 purity mismatches=%zu/%zu", rank_mismatch, purity_mismatch, purity_checked)};
}

Outcome roc_properties() {
  Rng rng(99);
  std::size_t antisym = 0, transform = 0, monotone = 0;
  for (int t = 0; t < 500; ++t) {
    std::vector<double> p(1 + rng.below(40)), n(1 + rng.below(40));
    for (auto& s : p) s = std::round(rng.normal() * 4.0) / 4.0;
    for (auto& s : n) s = std::round(rng.normal() * 4.0) / 4.0;
    const auto r = roc_curve(p, n);
    antisym += r.auc + roc_curve(n, p).auc == 1.0 ? 0 : 1;
    std::vector<double> tp = p, tn = n;
    for (auto& s : tp) s = std::atan(s) * 3.0 + 7.0;
    for (auto& s : tn) s = std::atan(s) * 3.0 + 7.0;
    transform += roc_curve(tp, tn).auc == r.auc ? 0 : 1;
    double prev = 0.0;
    for (const double cap : {0.0, 0.02, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const double tpr = tpr_at_fpr(r, cap).tpr;
      monotone += tpr >= prev ? 0 : 1;
      prev = tpr;
    }
  }
  const double hand = roc_curve(std::vector<double>{3, 1}, std::vector<double>{2, 0}).auc;

  // 2000 scores, labels assigned by a random shuffle independent of score.
  std::vector<double> scores(2000);
  for (auto& s : scores) s = rng.normal();
  const auto pos_idx = rng.sample_without_replacement(scores.size(), scores.size() / 2);
  std::vector<bool> is_pos(scores.size(), false);
  for (const auto i : pos_idx) is_pos[i] = true;
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (is_pos[i] ? pos : neg).push_back(scores[i]);
  const double shuffled = roc_curve(pos, neg).auc;

  const bool ok = antisym == 0 && transform == 0 && monotone == 0 && hand == 0.75 && shuffled >= 0.45 &&
                  shuffled <= 0.55;
  return {ok, fmt("antisymmetry fails=%zu transform fails=%zu monotone fails=%zu hand auc=%.17g shuffled auc=%.4f",
                  antisym, transform, monotone, hand, shuffled)};
}

Outcome outlier_in_sample() {
  const double thresh = similarity_threshold(std::vector<double>{1.0, 0.9, 0.8, 0.7, 0.6}, 0.8);
  Rng rng(31);
  std::size_t violations = 0;
  std::size_t weak_violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 5 + rng.below(60);
    const std::size_t dim = 2 + rng.below(30);
    const double spread = 0.05 + 2.0 * rng.uniform();
    std::vector<Embedding> fit(n, Embedding(dim));
    for (auto& e : fit) {
      for (std::size_t i = 0; i < dim; ++i) e[i] = static_cast<float>((i == 0 ? 1.0 : 0.0) + spread * rng.normal());
    }
    const auto d = OutlierDetector::fit(fit, 0.8);
    std::size_t accepted = 0;
    for (const auto& e : fit) accepted += d.detect(e) ? 1 : 0;
    // d_(j) <= Q for every order statistic up to floor(q (n - 1)).
    const auto implied = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n - 1))) + 1;
    violations += accepted >= implied ? 0 : 1;
    weak_violations += accepted >= static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n))) ? 0 : 1;
  }
  const bool ok = std::abs(thresh - 0.68) <= 1e-12 && violations == 0 && weak_violations == 0;
  return {ok, fmt("sim_thresh=%.15f |err|=%.2e fit sets below implied count=%zu below ceil(0.2n)=%zu", thresh,
                  std::abs(thresh - 0.68), violations, weak_violations)};
}

Outcome correlation() {
  std::vector<MixedBlock> blocks;
  for (const double sep : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    SynthSpec s;
    s.n_models = 19;
    s.k_per_cell = 16;
    s.dim = 64;
    s.separation = sep;
    s.seed = 12;
    blocks.push_back({s, 8});
  }
  const auto corpus = generate_mixed(blocks, 1);
  EvalConfig c;
  c.k_values = {15};
  c.repeats = 5;
  c.split_seed = 6;
  const auto r = distinguishability_correlation(corpus, c);
  if (!r.spearman) return {false, "degenerate correlation"};
  return {*r.spearman > 0.5, fmt("spearman=%.4f prompts=%zu", *r.spearman, r.points.size())};
}

bool bit_equal(const EmbeddingCorpus& a, const EmbeddingCorpus& b) {
  if (!(a.manifest() == b.manifest()) || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.record(i).key() != b.record(i).key()) return false;
    const auto& x = a.record(i).embedding;
    const auto& y = b.record(i).embedding;
    for (std::size_t t = 0; t < x.size(); ++t) {
      if (std::bit_cast<std::uint32_t>(x[t]) != std::bit_cast<std::uint32_t>(y[t])) return false;
    }
  }
  return true;
}

Outcome round_trips(const fs::path& dir) {
  SynthSpec s;
  s.n_models = 10;
  s.n_prompts = 50;
  s.k_per_cell = 20;
  s.dim = 64;
  s.normalize = false;
  const auto corpus = generate(s, 1);
  write_binary(corpus, dir / "rt.atk");
  write_jsonl(corpus, dir / "rt.jsonl");
  const auto bin = load_binary(dir / "rt.atk");
  const auto txt = load_jsonl(dir / "rt.jsonl");
  const bool b = bit_equal(bin, corpus);
  const bool j = bit_equal(txt, corpus);
  const bool cross = bit_equal(bin, txt) && bit_equal(load_corpus(dir / "rt.jsonl"), load_corpus(dir / "rt.atk"));
  return {b && j && cross, fmt("records=%zu binary=%s jsonl=%s cross-format=%s", corpus.size(), b ? "exact" : "DIFF",
                               j ? "exact" : "DIFF", cross ? "equal" : "DIFF")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& dir) {
  const std::string corpus = (dir / "det.atk").string();
  std::ostringstream sink;
  std::vector<std::string> synth{"synth", "--models", "8", "--prompts", "12", "--k", "16", "--dim", "16",
                                 "--separation", "6", "--seed", "5", "--out", corpus, "--quiet"};
  if (cli::dispatch(synth, sink, sink) != 0) return {false, "synth failed"};
  std::ofstream(dir / "det.json") << R"({"k_values": [1, 5, 15], "repeats": 4, "split_seed": 8, "trials": 50})";

  std::size_t files = 0;
  std::size_t differ = 0;
  for (const std::string mode :
       {"topk", "confusion", "prompt-attack", "ovr-sweep", "outlier-sweep", "correlation", "all"}) {
    std::string outs[2];
    for (int run = 0; run < 2; ++run) {
      const std::string threads = run == 0 ? "1" : "8";
      const fs::path out = dir / ("det_" + mode + "_" + threads);
      std::vector<std::string> args{"--threads", threads, "eval", "--corpus", corpus, "--mode", mode,
                                    "--config", (dir / "det.json").string(), "--out", out.string(), "--quiet"};
      std::ostringstream o, e;
      if (cli::dispatch(args, o, e) != 0) return {false, "eval " + mode + " failed: " + e.str()};
      outs[run] = o.str();
    }
    ++files;
    differ += outs[0] == outs[1] ? 0 : 1;
    for (const auto& entry : fs::directory_iterator(dir / ("det_" + mode + "_1"))) {
      ++files;
      const auto other = dir / ("det_" + mode + "_8") / entry.path().filename();
      differ += slurp(entry.path()) == slurp(other) ? 0 : 1;
    }
  }
  return {differ == 0, fmt("compared %zu outputs (stdout + files) across --threads 1 vs 8, differing=%zu", files,
                           differ)};
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "attrib_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"random-baseline", random_baseline},
      {"perfect-separation", perfect_separation},
      {"k-sweep-monotonicity", k_sweep},
      {"prompt-controlled-attack", prompt_attack},
      {"brute-force-oracle-equivalence", oracle_equivalence},
      {"roc-correctness", roc_properties},
      {"outlier-in-sample-acceptance", outlier_in_sample},
      {"distinguishability-accuracy-correlation", correlation},
      {"format-round-trips", [&] { return round_trips(dir); }},
      {"determinism-threads", [&] { return determinism(dir); }},
  };

  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  fs::remove_all(dir);
  std::cout << (checks.size() - failures) << "/" << checks.size() << " acceptance checks passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
