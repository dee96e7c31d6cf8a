// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "attrib/attrib.hpp"
#include "attrib/linalg.hpp"
#include "report.hpp"

namespace attrib::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<double> kDefaultCaps{0.02, 0.05};

struct Globals {
  std::size_t threads = 0;  // 0: ATTRIB_THREADS, then hardware
  bool quiet = false;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::size_t threads = 1;
  bool quiet = false;

  void note(const std::string& msg) const {
    if (!quiet) err << msg << "\n";
  }
};

// Corpora are normalized on ingest unless the caller asks for raw vectors.
EmbeddingCorpus load_input(const std::string& path, bool raw) {
  EmbeddingCorpus corpus = load_corpus(path);
  if (raw || corpus.normalized()) return corpus;
  return normalize(corpus);
}

std::string read_text(const fs::path& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

struct Query {
  Embedding embedding;
  std::optional<RecordKey> key;
};

Embedding embedding_from_json(const json& j) {
  if (!j.is_array()) throw DataError("query embedding must be a JSON array of numbers");
  Embedding e;
  e.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw DataError("query embedding must be a JSON array of numbers");
    e.push_back(v.get<float>());
  }
  return e;
}

// Accepts a JSONL record (first non-blank line), a JSON array, or plain
// numbers separated by whitespace or commas.
Query parse_query(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw DataError("query file is empty");
  Query q;
  if (text[first] == '{') {
    auto end = text.find('\n', first);
    const std::string line = text.substr(first, end == std::string::npos ? std::string::npos : end - first);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(std::string("query record: ") + e.what());
    }
    if (!j.contains("embedding")) throw DataError("query record has no 'embedding' field");
    q.embedding = embedding_from_json(j.at("embedding"));
    if (j.contains("prompt_id") && j.contains("model_id") && j.contains("seed")) {
      try {
        q.key = RecordKey{j.at("prompt_id").get<std::string>(), j.at("model_id").get<std::string>(),
                          j.at("seed").get<std::int64_t>()};
      } catch (const json::exception& e) {
        throw DataError(std::string("query record: ") + e.what());
      }
    }
  } else if (text[first] == '[') {
    try {
      q.embedding = embedding_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw DataError(std::string("query array: ") + e.what());
    }
  } else {
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::string token;
    while (in >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') throw DataError("query: cannot parse '" + token + "' as a number");
      q.embedding.push_back(static_cast<float>(v));
    }
  }
  if (q.embedding.empty()) throw DataError("query embedding is empty");
  if (!linalg::all_finite(q.embedding)) throw DataError("query embedding has a non-finite component");
  return q;
}

void print_json(const Context& ctx, const json& j) { ctx.out << j.dump(2) << "\n"; }

// "-" selects stdout.
void emit_csv(const Context& ctx, const std::string& path, const std::string& text) {
  if (path == "-") {
    ctx.out << text;
    return;
  }
  write_text(path, text);
  ctx.note("wrote " + path);
}

json corpus_summary(const EmbeddingCorpus& corpus) {
  const auto& m = corpus.manifest();
  return json{{"models", m.model_ids.size()},    {"prompts", m.prompt_ids.size()}, {"records", corpus.size()},
              {"dim", m.dim},                     {"normalized", m.normalized},      {"encoder_name", m.encoder_name},
              {"created_at", m.created_at},       {"model_ids", m.model_ids},        {"prompt_ids", m.prompt_ids}};
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  SynthSpec spec;
  bool raw = false;
  std::string out;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* c = app.add_subcommand("synth", "Generate a synthetic Gaussian-cluster corpus");
  c->add_option("--models", a.spec.n_models, "Number of models")->capture_default_str();
  c->add_option("--prompts", a.spec.n_prompts, "Number of prompts")->capture_default_str();
  c->add_option("--k", a.spec.k_per_cell, "Records per (prompt, model)")->capture_default_str();
  c->add_option("--dim", a.spec.dim, "Embedding dimension")->capture_default_str();
  c->add_option("--separation", a.spec.separation, "Pairwise mean distance in units of sigma")->capture_default_str();
  c->add_option("--sigma", a.spec.sigma, "Per-component noise std")->capture_default_str();
  c->add_option("--seed", a.spec.seed, "Random seed")->capture_default_str();
  c->add_flag("--raw", a.raw, "Keep unnormalized vectors");
  c->add_option("--out", a.out, "Output path (.jsonl or binary)")->required();
}

int run_synth(const Context& ctx, SynthArgs& a) {
  a.spec.normalize = !a.raw;
  const EmbeddingCorpus corpus = generate(a.spec, ctx.threads);
  save_corpus(corpus, a.out);
  ctx.note("wrote " + std::to_string(corpus.size()) + " records to " + a.out);
  print_json(ctx, corpus_summary(corpus));
  return kOk;
}

// --- inspect / convert -----------------------------------------------------

struct InspectArgs {
  std::string corpus;
};

struct ConvertArgs {
  std::string in;
  std::string out;
  bool normalize = false;
};

int run_inspect(const Context& ctx, const InspectArgs& a) {
  print_json(ctx, corpus_summary(load_corpus(a.corpus)));
  return kOk;
}

int run_convert(const Context& ctx, const ConvertArgs& a) {
  EmbeddingCorpus corpus = load_corpus(a.in);
  if (a.normalize && !corpus.normalized()) corpus = normalize(corpus);
  save_corpus(corpus, a.out);
  ctx.note("wrote " + std::to_string(corpus.size()) + " records to " + a.out);
  return kOk;
}

// --- classify --------------------------------------------------------------

struct ClassifyArgs {
  std::string corpus;
  std::string prompt;
  std::string query;
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
  std::string metric = "euclidean";
  bool renormalize = false;
  bool raw = false;
};

int run_classify(const Context& ctx, const ClassifyArgs& a) {
  const Metric metric = parse_metric(a.metric);
  const EmbeddingCorpus corpus = load_input(a.corpus, a.raw);
  Query q = parse_query(read_text(a.query));
  if (q.embedding.size() != corpus.dim()) {
    throw DataError("query dimension " + std::to_string(q.embedding.size()) + " does not match corpus dimension " +
                    std::to_string(corpus.dim()));
  }
  if (corpus.normalized()) q.embedding = normalize_embedding(q.embedding);

  ClusterOptions options;
  options.k = a.k;
  options.sampling_seed = a.seed;
  options.renormalize_centroid = a.renormalize;
  if (q.key) {
    const std::size_t idx = corpus.find(*q.key);
    if (idx < corpus.size()) options.exclude.push_back(idx);
  }
  const auto clusters = build_clusters(corpus, a.prompt, options);
  AttributionRanking ranking = rank_models(q.embedding, clusters, metric);
  ranking.query_key = q.key;
  json j = report::to_json(ranking);
  j["prompt_id"] = a.prompt;
  j["metric"] = std::string(to_string(metric));
  print_json(ctx, j);
  return kOk;
}

// --- distinguish -----------------------------------------------------------

struct DistinguishArgs {
  std::string corpus;
  double tau = kDefaultTau;
  bool per_model = false;
  std::string csv;
  bool raw = false;
};

int run_distinguish(const Context& ctx, const DistinguishArgs& a) {
  const EmbeddingCorpus corpus = load_input(a.corpus, a.raw);
  const auto reports = rank_prompts(corpus, a.tau, ctx.threads);
  if (!a.csv.empty()) {
    emit_csv(ctx, a.csv, report::separability_csv(reports, corpus.model_ids()));
    return kOk;
  }
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report::to_json(r, a.per_model));
  print_json(ctx, arr);
  return kOk;
}

// --- ovr / outlier ---------------------------------------------------------

struct OvrArgs {
  std::string corpus;
  std::string target;
  bool all_targets = false;
  std::vector<double> fpr;
  std::string csv;
  std::uint64_t seed = 0;
  std::optional<std::size_t> k;
  double threshold = 0.0;
  bool renormalize = false;
  bool raw = false;
};

void emit_rows(const Context& ctx, std::span<const TargetReport> rows, std::span<const double> caps,
               const std::string& csv) {
  if (!csv.empty()) {
    emit_csv(ctx, csv, report::target_rows_csv(rows, caps));
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(report::to_json(r));
  print_json(ctx, arr);
}

void check_target_choice(const std::string& target, bool all) {
  if (all == !target.empty()) throw std::invalid_argument("give exactly one of --target and --all-targets");
}

int run_ovr(const Context& ctx, const OvrArgs& a) {
  check_target_choice(a.target, a.all_targets);
  OvrOptions options;
  options.fpr_caps = a.fpr.empty() ? kDefaultCaps : a.fpr;
  options.split_seed = a.seed;
  options.k = a.k;
  options.threshold = a.threshold;
  options.renormalize_centroid = a.renormalize;
  options.threads = ctx.threads;
  const EmbeddingCorpus corpus = load_input(a.corpus, a.raw);
  std::vector<TargetReport> rows;
  if (a.all_targets) {
    rows = fixed_target_sweep_all(corpus, options);
  } else {
    rows.push_back(fixed_target_sweep(corpus, a.target, options));
  }
  emit_rows(ctx, rows, options.fpr_caps, a.csv);
  return kOk;
}

struct OutlierArgs {
  std::string corpus;
  std::string target;
  bool all_targets = false;
  std::string prompt;
  std::string query;
  double quantile = kDefaultQuantile;
  std::size_t fit_size = kDefaultFitSize;
  std::vector<double> fpr;
  std::string csv;
  std::uint64_t seed = 0;
  bool raw = false;
};

// Fits on the target's generations for one prompt and scores one query.
int outlier_single(const Context& ctx, const OutlierArgs& a, const EmbeddingCorpus& corpus) {
  if (a.prompt.empty()) throw std::invalid_argument("--query needs --prompt");
  if (a.all_targets) throw std::invalid_argument("--query needs a single --target");
  Query q = parse_query(read_text(a.query));
  if (q.embedding.size() != corpus.dim()) {
    throw DataError("query dimension " + std::to_string(q.embedding.size()) + " does not match corpus dimension " +
                    std::to_string(corpus.dim()));
  }
  if (!corpus.has_prompt(a.prompt)) throw DataError("unknown prompt '" + a.prompt + "'");
  const std::size_t excluded = q.key ? corpus.find(*q.key) : corpus.size();
  std::vector<std::size_t> pool;
  for (const std::size_t i : corpus.cell(a.prompt, a.target)) {
    if (i != excluded) pool.push_back(i);
  }
  if (pool.size() < 2) {
    throw DataError("need at least 2 generations of '" + a.target + "' for prompt '" + a.prompt + "' to fit");
  }
  if (pool.size() > a.fit_size) {
    Rng rng = Rng::stream(a.seed, {hash_id(a.prompt), hash_id(a.target), 0x66});
    const auto picks = rng.sample_without_replacement(pool.size(), a.fit_size);
    std::vector<std::size_t> chosen;
    for (const std::size_t p : picks) chosen.push_back(pool[p]);
    pool = std::move(chosen);
  }
  std::vector<Embedding> fit_set;
  for (const std::size_t i : pool) fit_set.push_back(corpus.record(i).embedding);
  const auto detector = OutlierDetector::fit(fit_set, a.quantile);
  const double score = detector.score(q.embedding);
  print_json(ctx, json{{"prompt_id", a.prompt},
                       {"target", a.target},
                       {"similarity", detector.similarity(q.embedding)},
                       {"sim_thresh", detector.sim_thresh()},
                       {"score", score},
                       {"detected", accept_margin(score)},
                       {"fit_size", fit_set.size()},
                       {"quantile", a.quantile}});
  return kOk;
}

int run_outlier(const Context& ctx, const OutlierArgs& a) {
  check_target_choice(a.target, a.all_targets);
  if (a.fit_size < 2) throw std::invalid_argument("--fit-size must be at least 2");
  if (!(a.quantile > 0.0 && a.quantile < 1.0)) throw std::invalid_argument("--quantile must be in (0, 1)");
  const EmbeddingCorpus corpus = load_input(a.corpus, a.raw);
  if (!a.all_targets && !corpus.has_model(a.target)) throw DataError("unknown model '" + a.target + "'");
  if (!a.query.empty()) return outlier_single(ctx, a, corpus);

  OutlierSweepOptions options;
  options.fpr_caps = a.fpr.empty() ? kDefaultCaps : a.fpr;
  options.split_seed = a.seed;
  options.fit_size = a.fit_size;
  options.quantile = a.quantile;
  options.threads = ctx.threads;
  std::vector<TargetReport> rows;
  if (a.all_targets) {
    rows = outlier_target_sweep_all(corpus, options);
  } else {
    rows.push_back(outlier_target_sweep(corpus, a.target, options));
  }
  // Multi-target outlier sweeps are tabular by nature; default to CSV.
  emit_rows(ctx, rows, options.fpr_caps, a.csv.empty() && a.all_targets ? "-" : a.csv);
  return kOk;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string corpus;
  std::string mode = "topk";
  std::string config;
  std::string out;
  bool raw = false;
};

const std::vector<std::string> kModes{"topk",       "confusion",     "prompt-attack",
                                      "ovr-sweep",  "outlier-sweep", "correlation"};

// Runs one mode; returns its JSON result and fills `files` with CSV outputs.
json eval_mode(const std::string& mode, const EmbeddingCorpus& corpus, const EvalConfig& config,
               std::vector<std::pair<std::string, std::string>>& files) {
  if (mode == "topk") {
    const auto curve = topk_accuracy(corpus, config);
    files.emplace_back("topk.csv", report::accuracy_csv(curve));
    return report::to_json(curve);
  }
  if (mode == "confusion") {
    const auto cm = confusion(corpus, config);
    files.emplace_back("confusion.csv", report::confusion_csv(cm));
    return report::to_json(cm);
  }
  if (mode == "prompt-attack") {
    std::vector<std::string> prompts = config.prompts;
    if (prompts.empty()) {
      prompts = select_separable_prompts(corpus, config.tau, config.attack_prompts, config.split_seed, config.threads);
    }
    if (prompts.empty()) throw DataError("no prompt is fully separable; pass prompts explicitly in the config");
    const auto r = prompt_controlled_attack(corpus, prompts, config.trials, config.split_seed, config.metric);
    return json{{"prompts", prompts}, {"accuracy", r.accuracy}, {"trials", r.trials}, {"correct", r.correct}};
  }
  if (mode == "ovr-sweep") {
    const auto rows = fixed_target_sweep_all(corpus, ovr_options(config));
    files.emplace_back("ovr.csv", report::target_rows_csv(rows, config.fpr_caps));
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(report::to_json(r));
    return arr;
  }
  if (mode == "outlier-sweep") {
    const auto rows = outlier_target_sweep_all(corpus, outlier_options(config));
    files.emplace_back("outlier.csv", report::target_rows_csv(rows, config.fpr_caps));
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(report::to_json(r));
    return arr;
  }
  if (mode == "correlation") {
    const auto rep = distinguishability_correlation(corpus, config);
    files.emplace_back("correlation.csv", report::correlation_csv(rep));
    return report::to_json(rep);
  }
  throw std::invalid_argument("unknown --mode '" + mode + "'");
}

int run_eval(const Context& ctx, const EvalArgs& a) {
  if (a.mode != "all" && std::find(kModes.begin(), kModes.end(), a.mode) == kModes.end()) {
    throw std::invalid_argument("unknown --mode '" + a.mode + "'");
  }
  EvalConfig config;
  if (!a.config.empty()) {
    json j;
    try {
      j = json::parse(read_text(a.config));
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("eval config: ") + e.what());
    }
    config = report::eval_config_from_json(j);
  }
  config.threads = ctx.threads;
  config.validate();
  const EmbeddingCorpus corpus = load_input(a.corpus, a.raw);

  std::vector<std::pair<std::string, std::string>> files;
  json results = json::object();
  if (a.mode == "all") {
    for (const auto& m : kModes) results[m] = eval_mode(m, corpus, config, files);
  } else {
    results[a.mode] = eval_mode(a.mode, corpus, config, files);
  }
  const json summary{{"mode", a.mode},
                     {"config", report::to_json(config)},
                     {"corpus", {{"records", corpus.size()},
                                 {"models", corpus.model_ids().size()},
                                 {"prompts", corpus.prompt_ids().size()},
                                 {"dim", corpus.dim()},
                                 {"encoder_name", corpus.manifest().encoder_name}}},
                     {"results", std::move(results)}};
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, text] : files) write_text(dir / name, text);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    ctx.note("wrote " + std::to_string(files.size() + 1) + " files to " + dir.string());
  }
  print_json(ctx, summary);
  return kOk;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribute generated images to their source model from embeddings", "attrib"};
  app.set_version_flag("--version", ATTRIB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads (0: ATTRIB_THREADS or all cores)");
  app.add_flag("-q,--quiet", globals.quiet, "Suppress progress messages on stderr");

  SynthArgs synth;
  add_synth(app, synth);

  InspectArgs inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Print corpus shape and manifest as JSON");
  c_inspect->add_option("--corpus", inspect.corpus, "Corpus file")->required();

  ConvertArgs convert;
  auto* c_convert = app.add_subcommand("convert", "Convert between JSONL and binary corpora");
  c_convert->add_option("--in", convert.in, "Input corpus")->required();
  c_convert->add_option("--out", convert.out, "Output path (.jsonl or binary)")->required();
  c_convert->add_flag("--normalize", convert.normalize, "Normalize embeddings before writing");

  ClassifyArgs classify;
  auto* c_classify = app.add_subcommand("classify", "Rank models for one query embedding");
  c_classify->add_option("--corpus", classify.corpus, "Corpus file")->required();
  c_classify->add_option("--prompt", classify.prompt, "Prompt the query was generated from")->required();
  c_classify->add_option("--query", classify.query, "File (- for stdin) holding a JSONL record, JSON array or plain numbers")->required();
  c_classify->add_option("--k", classify.k, "Records per centroid (default: all)");
  c_classify->add_option("--seed", classify.seed, "Subsampling seed")->capture_default_str();
  c_classify->add_option("--metric", classify.metric, "euclidean or cosine")->capture_default_str();
  c_classify->add_flag("--renormalize-centroid", classify.renormalize, "Scale centroids to unit norm");
  c_classify->add_flag("--raw", classify.raw, "Do not normalize embeddings on load");

  DistinguishArgs distinguish;
  auto* c_dist = app.add_subcommand("distinguish", "Rank prompts by nearest-neighbour separability");
  c_dist->add_option("--corpus", distinguish.corpus, "Corpus file")->required();
  c_dist->add_option("--tau", distinguish.tau, "Purity threshold")->capture_default_str();
  c_dist->add_flag("--per-model", distinguish.per_model, "Include per-model purity in JSON output");
  c_dist->add_option("--csv", distinguish.csv, "Write CSV to this path (- for stdout)");
  c_dist->add_flag("--raw", distinguish.raw, "Do not normalize embeddings on load");

  OvrArgs ovr;
  auto* c_ovr = app.add_subcommand("ovr", "One-vs-rest margin detection for a target model");
  c_ovr->add_option("--corpus", ovr.corpus, "Corpus file")->required();
  c_ovr->add_option("--target", ovr.target, "Target model id");
  c_ovr->add_flag("--all-targets", ovr.all_targets, "Sweep every model");
  c_ovr->add_option("--fpr", ovr.fpr, "FPR cap for TPR reporting (repeatable; default 0.02 0.05)");
  c_ovr->add_option("--seed", ovr.seed, "Hold-out seed")->capture_default_str();
  c_ovr->add_option("--k", ovr.k, "Records per centroid (default: all remaining)");
  c_ovr->add_option("--threshold", ovr.threshold, "Margin decision threshold")->capture_default_str();
  c_ovr->add_flag("--renormalize-centroid", ovr.renormalize, "Scale centroids to unit norm");
  c_ovr->add_option("--csv", ovr.csv, "Write CSV to this path (- for stdout)");
  c_ovr->add_flag("--raw", ovr.raw, "Do not normalize embeddings on load");

  OutlierArgs outlier;
  auto* c_out = app.add_subcommand("outlier", "Single-model outlier detection");
  c_out->add_option("--corpus", outlier.corpus, "Corpus file")->required();
  c_out->add_option("--target", outlier.target, "Target model id");
  c_out->add_flag("--all-targets", outlier.all_targets, "Sweep every model");
  c_out->add_option("--prompt", outlier.prompt, "Prompt for --query");
  c_out->add_option("--query", outlier.query, "Query file (- for stdin); scores one query instead of sweeping");
  c_out->add_option("--quantile", outlier.quantile, "Distance quantile for the threshold")->capture_default_str();
  c_out->add_option("--fit-size", outlier.fit_size, "Target generations used to fit")->capture_default_str();
  c_out->add_option("--fpr", outlier.fpr, "FPR cap for TPR reporting (repeatable; default 0.02 0.05)");
  c_out->add_option("--seed", outlier.seed, "Split seed")->capture_default_str();
  c_out->add_option("--csv", outlier.csv, "Write CSV to this path (- for stdout)");
  c_out->add_flag("--raw", outlier.raw, "Do not normalize embeddings on load");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Run an evaluation and write CSV plus summary.json");
  c_eval->add_option("--corpus", eval.corpus, "Corpus file")->required();
  c_eval->add_option("--mode", eval.mode,
                     "topk, confusion, prompt-attack, ovr-sweep, outlier-sweep, correlation or all")
      ->capture_default_str();
  c_eval->add_option("--config", eval.config, "JSON file with evaluation settings");
  c_eval->add_option("--out", eval.out, "Directory for CSV and summary.json");
  c_eval->add_flag("--raw", eval.raw, "Do not normalize embeddings on load");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx{out, err, resolve_threads(globals.threads), globals.quiet};
  try {
    if (app.got_subcommand("synth")) return run_synth(ctx, synth);
    if (app.got_subcommand("inspect")) return run_inspect(ctx, inspect);
    if (app.got_subcommand("convert")) return run_convert(ctx, convert);
    if (app.got_subcommand("classify")) return run_classify(ctx, classify);
    if (app.got_subcommand("distinguish")) return run_distinguish(ctx, distinguish);
    if (app.got_subcommand("ovr")) return run_ovr(ctx, ovr);
    if (app.got_subcommand("outlier")) return run_outlier(ctx, outlier);
    if (app.got_subcommand("eval")) return run_eval(ctx, eval);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace attrib::cli
