#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <cctype>

#include "kstar/baselines.hpp"
#include "kstar/metrics.hpp"
#include "kstar/synth.hpp"

namespace kstar::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Record make_record(const std::string& command) {
  Record r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  return r;
}

Record fit_config_json(const FitConfig& fit) {
  Record j;
  j["seed"] = fit.seed;
  j["mode"] = fit.strict_convergence ? "strict" : "patience";
  j["patience"] = fit.patience;
  j["min_improvement"] = fit.min_improvement;
  j["max_cycles"] = fit.max_cycles;
  return j;
}

Record matrix_json(const Matrix& m) {
  Record rows = Record::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

// JSON has no infinity; unscorable values become null.
Record finite_or_null(double v) { return std::isfinite(v) ? Record(v) : Record(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string dump(const Record& r) { return r.dump(2) + "\n"; }

void write_assignments(const std::filesystem::path& path,
                       const std::vector<std::size_t>& assignments) {
  std::string text = "index,cluster\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    text += std::to_string(i) + "," + std::to_string(assignments[i]) + "\n";
  }
  write_text(path, text);
}

std::filesystem::path assignments_path(const std::optional<std::filesystem::path>& explicit_path,
                                       const std::filesystem::path& output) {
  if (explicit_path) return *explicit_path;
  std::filesystem::path p = output;
  p.replace_extension(".assignments.csv");
  return p;
}

Dataset load_features(const std::filesystem::path& input,
                      const std::optional<std::string>& label_column) {
  if (label_column) return load_labelled_csv(input, parse_column(*label_column)).data;
  return load_csv(input);
}

Record fit_result_json(const FitResult& fit, const PrecisionInfo& precision) {
  Record j;
  j["k"] = fit.k();
  j["centroids"] = matrix_json(fit.model.centroids);
  j["assignments"] = fit.model.assignments;
  j["cost"] = {{"model_cost", fit.cost.model_cost},
               {"index_cost", fit.cost.index_cost},
               {"residual_cost", fit.cost.residual_cost},
               {"total", fit.cost.total}};
  j["precision"] = {{"min_gap", precision.min_gap},
                    {"value_range", precision.value_range},
                    {"bits_per_coord", precision.bits_per_coord}};
  j["cost_trace"] = fit.cost_trace;
  j["n_cycles"] = fit.n_cycles;
  j["split_count"] = fit.split_count;
  j["merge_count"] = fit.merge_count;
  return j;
}

void check_algorithms(const std::vector<std::string>& algorithms,
                      std::initializer_list<const char*> allowed) {
  if (algorithms.empty()) throw UsageError("--algorithms must name at least one algorithm");
  for (const std::string& a : algorithms) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* x) { return a == x; })) {
      std::string list;
      for (const char* x : allowed) list += std::string(list.empty() ? "" : ", ") + x;
      throw UsageError("unknown algorithm '" + a + "' (expected one of: " + list + ")");
    }
  }
}

// Predicted k for the named algorithm; `true_k` is only used by lloyd.
std::size_t predict_k(const std::string& algorithm, const Dataset& data, std::uint64_t seed,
                      const FitConfig& base_fit, std::size_t true_k,
                      std::vector<std::size_t>* assignments = nullptr) {
  if (algorithm == "kstar") {
    FitConfig cfg = base_fit;
    cfg.seed = seed;
    FitResult r = fit(data, cfg);
    if (assignments) *assignments = std::move(r.model.assignments);
    return r.k();
  }
  Rng rng(seed);
  if (algorithm == "sweep-bic") {
    SweepReport r = sweep_k_bic(data, rng);
    if (assignments) *assignments = std::move(r.chosen.assignments);
    return r.chosen_k;
  }
  KmeansResult r = lloyd(data, true_k, rng);
  if (assignments) *assignments = std::move(r.assignments);
  return r.k();
}

std::string format_real(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::string format_seconds(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

ColumnSelector parse_column(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      })) {
    return static_cast<std::size_t>(std::stoull(text));
  }
  return text;
}

Record error_record(const std::string& type, const std::string& message) {
  Record r;
  r["schema_version"] = kSchemaVersion;
  r["error"] = {{"type", type}, {"message", message}};
  return r;
}

Record run_cluster(const ClusterOptions& options) {
  const auto start = Clock::now();
  const Dataset data = load_features(options.input, options.label_column);
  const PrecisionInfo precision = precision_info(data);
  const FitResult result = fit(data, options.fit);

  Record r = make_record("cluster");
  r["config"] = {{"input", options.input.string()},
                 {"label_column", options.label_column ? Record(*options.label_column) : Record()},
                 {"n", data.n()},
                 {"dim", data.dim()},
                 {"fit", fit_config_json(options.fit)}};
  r["result"] = fit_result_json(result, precision);
  r["timing"] = {{"fit_seconds", result.runtime_seconds}, {"wall_seconds", seconds_since(start)}};

  if (options.output) {
    write_text(*options.output, dump(r));
    write_assignments(assignments_path(options.assignments, *options.output),
                      result.model.assignments);
  }
  return r;
}

Record run_sweep(const SweepOptions& options) {
  const auto start = Clock::now();
  const Dataset data = load_features(options.input, options.label_column);
  Rng rng(options.seed);
  std::optional<std::vector<std::size_t>> grid;
  if (!options.grid.empty()) grid = options.grid;
  const SweepReport sweep = sweep_k_bic(data, rng, grid);

  Record r = make_record("sweep-bic");
  r["config"] = {{"input", options.input.string()},
                 {"label_column", options.label_column ? Record(*options.label_column) : Record()},
                 {"n", data.n()},
                 {"dim", data.dim()},
                 {"seed", options.seed},
                 {"grid", options.grid.empty() ? Record("default") : Record(options.grid)}};
  Record scores = Record::array();
  for (double s : sweep.bic_scores) scores.push_back(finite_or_null(s));
  r["result"] = {{"k", sweep.chosen_k},
                 {"centroids", matrix_json(sweep.chosen.centroids)},
                 {"assignments", sweep.chosen.assignments},
                 {"inertia", sweep.chosen.inertia},
                 {"n_iters", sweep.chosen.n_iters},
                 {"candidate_ks", sweep.candidate_ks},
                 {"bic_scores", scores}};
  r["timing"] = {{"sweep_seconds", sweep.runtime_seconds}, {"wall_seconds", seconds_since(start)}};

  if (options.output) {
    write_text(*options.output, dump(r));
    write_assignments(assignments_path(options.assignments, *options.output),
                      sweep.chosen.assignments);
  }
  return r;
}

Record run_synth(const SynthOptions& options) {
  if (options.k_max < 1) throw UsageError("--k-max must be at least 1");
  if (options.reps < 1) throw UsageError("--reps must be at least 1");
  if (options.seps.empty()) throw UsageError("--seps must list at least one separation");
  for (double s : options.seps) {
    if (!(s > 0.0)) throw UsageError("--seps values must be positive");
  }
  if (options.points < options.k_max) throw UsageError("--points must be >= --k-max");
  check_algorithms(options.algorithms, {"kstar", "sweep-bic"});

  const auto start = Clock::now();
  KRecoveryOptions exp;
  exp.k_values.resize(options.k_max);
  std::iota(exp.k_values.begin(), exp.k_values.end(), std::size_t{1});
  exp.sep_values = options.seps;
  exp.reps = options.reps;
  exp.total_points = options.points;
  exp.base_seed = options.seed;

  std::string cells_csv = "algorithm,true_k,min_sep,rep,predicted_k,exact,seconds\n";
  Record summaries;
  Record timing;
  for (const std::string& algorithm : options.algorithms) {
    const auto alg_start = Clock::now();
    const KRecoveryReport report = k_recovery_experiment(
        exp, [&](const Dataset& data, std::uint64_t seed) {
          return predict_k(algorithm, data, seed, options.fit, 0);
        });
    for (const KRecoveryCell& c : report.cells) {
      cells_csv += algorithm + "," + std::to_string(c.true_k) + "," + format_real(c.min_sep) +
                   "," + std::to_string(c.rep) + "," + std::to_string(c.predicted_k) + "," +
                   (c.exact ? "1" : "0") + "," + format_seconds(c.runtime_seconds) + "\n";
    }
    Record per_sep = Record::array();
    for (const auto& [sep, s] : report.per_sep) {
      per_sep.push_back({{"min_sep", sep}, {"runs", s.runs}, {"accuracy", s.accuracy},
                         {"mse", s.mse}});
    }
    summaries[algorithm] = {{"per_sep", per_sep},
                            {"overall",
                             {{"runs", report.overall.runs},
                              {"accuracy", report.overall.accuracy},
                              {"mse", report.overall.mse}}},
                            {"cells", report.cells.size()}};
    timing[algorithm + "_seconds"] = seconds_since(alg_start);
  }
  timing["wall_seconds"] = seconds_since(start);

  Record fit_cfg = fit_config_json(options.fit);
  fit_cfg.erase("seed");
  Record r = make_record("synth");
  r["config"] = {{"k_max", options.k_max}, {"seps", options.seps},     {"reps", options.reps},
                 {"points", options.points}, {"seed", options.seed},
                 {"algorithms", options.algorithms}, {"fit", fit_cfg}};
  r["result"] = summaries;
  r["timing"] = timing;

  write_text(options.output_dir / "cells.csv", cells_csv);
  write_text(options.output_dir / "summary.json", dump(r));
  return r;
}

Record run_eval(const EvalOptions& options) {
  check_algorithms(options.algorithms, {"kstar", "sweep-bic", "lloyd"});
  const auto start = Clock::now();
  const LabelledDataset labelled =
      load_labelled_csv(options.input, parse_column(options.label_column));

  Record reports = Record::array();
  Record timing;
  for (const std::string& algorithm : options.algorithms) {
    const auto alg_start = Clock::now();
    std::vector<std::size_t> predicted;
    const std::size_t k = predict_k(algorithm, labelled.data, options.seed, options.fit,
                                    labelled.num_classes, &predicted);
    const double runtime = seconds_since(alg_start);
    const ContingencyTable table = contingency(labelled.labels, predicted);
    reports.push_back({{"algorithm", algorithm},
                       {"acc", accuracy(table)},
                       {"ari", table.n >= 2 ? Record(ari(table)) : Record(nullptr)},
                       {"nmi", nmi(table)},
                       {"predicted_k", k},
                       {"true_k", labelled.num_classes},
                       {"runtime", runtime}});
    timing[algorithm + "_seconds"] = runtime;
  }
  timing["wall_seconds"] = seconds_since(start);

  Record r = make_record("eval");
  r["config"] = {{"input", options.input.string()},
                 {"label_column", options.label_column},
                 {"n", labelled.data.n()},
                 {"dim", labelled.data.dim()},
                 {"seed", options.seed},
                 {"algorithms", options.algorithms},
                 {"fit", fit_config_json(options.fit)}};
  r["result"] = reports;
  r["timing"] = timing;
  if (options.output) write_text(*options.output, dump(r));
  return r;
}

Record run_bench(const BenchOptions& options) {
  check_algorithms(options.algorithms, {"kstar", "lloyd", "sweep-bic"});
  if (options.sizes.empty()) throw UsageError("--sizes must list at least one size");
  if (options.reps < 1) throw UsageError("--reps must be at least 1");

  std::optional<LabelledDataset> labelled;
  std::optional<Dataset> plain;
  if (options.label_column) {
    labelled = load_labelled_csv(options.input, parse_column(*options.label_column));
  } else {
    plain = load_csv(options.input);
  }
  const Dataset& data = labelled ? labelled->data : *plain;
  for (std::size_t size : options.sizes) {
    if (size == 0 || size > data.n()) {
      throw UsageError("size " + std::to_string(size) + " is outside 1.." +
                       std::to_string(data.n()));
    }
  }

  std::vector<std::string> skipped;
  std::vector<std::string> algorithms;
  for (const std::string& a : options.algorithms) {
    if (a == "lloyd" && !labelled) {
      skipped.push_back(a);  // true k comes from the labels
    } else {
      algorithms.push_back(a);
    }
  }

  std::string csv = "algorithm,size,rep,seconds,predicted_k\n";
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> times;
  for (std::size_t size : options.sizes) {
    for (std::size_t rep = 0; rep < options.reps; ++rep) {
      Rng sampler(derive_seed(options.seed, size, rep, 0));
      std::vector<std::size_t> rows(data.n());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      for (std::size_t i = 0; i < size; ++i) {
        std::swap(rows[i], rows[i + uniform_index(sampler, data.n() - i)]);
      }
      rows.resize(size);
      std::sort(rows.begin(), rows.end());
      const Dataset sample = data.subset(rows);
      std::size_t true_k = 0;
      if (labelled) {
        std::vector<std::size_t> classes;
        for (std::size_t r : rows) classes.push_back(labelled->labels[r]);
        std::sort(classes.begin(), classes.end());
        true_k = static_cast<std::size_t>(
            std::unique(classes.begin(), classes.end()) - classes.begin());
      }
      const std::uint64_t alg_seed = derive_seed(options.seed, size, rep, 1);
      for (const std::string& algorithm : algorithms) {
        const auto t0 = Clock::now();
        const std::size_t k = predict_k(algorithm, sample, alg_seed, options.fit, true_k);
        const double secs = seconds_since(t0);
        times[{algorithm, size}].push_back(secs);
        csv += algorithm + "," + std::to_string(size) + "," + std::to_string(rep) + "," +
               format_seconds(secs) + "," + std::to_string(k) + "\n";
      }
    }
  }
  if (options.output) write_text(*options.output, csv);

  Record means = Record::array();
  for (const auto& [key, ts] : times) {
    means.push_back({{"algorithm", key.first},
                     {"size", key.second},
                     {"mean_seconds",
                      std::accumulate(ts.begin(), ts.end(), 0.0) / static_cast<double>(ts.size())}});
  }
  Record r = make_record("bench");
  r["config"] = {{"input", options.input.string()},
                 {"sizes", options.sizes},
                 {"reps", options.reps},
                 {"seed", options.seed},
                 {"algorithms", options.algorithms},
                 {"label_column", options.label_column ? Record(*options.label_column) : Record()},
                 {"fit", fit_config_json(options.fit)}};
  r["result"] = {{"rows", options.sizes.size() * options.reps * algorithms.size()},
                 {"skipped", skipped}};
  r["timing"] = {{"mean_seconds", means}};
  return r;
}

}  // namespace kstar::cli
