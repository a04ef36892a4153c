// kstar: parameter-free clustering from the command line.
//
//   kstar cluster   --input data.csv --output run.json
//   kstar sweep-bic --input data.csv --output sweep.json
//   kstar synth     --k-max 50 --seps 2,3,4,5 --reps 10 --output out/
//   kstar eval      --input labelled.csv --label-col 2
//   kstar bench     --input data.csv --sizes 1000,2000 --output times.csv

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_fit_flags(CLI::App* cmd, kstar::FitConfig& fit) {
  cmd->add_flag("--strict", fit.strict_convergence,
                "Run until a full cycle changes nothing (ignores patience)");
  cmd->add_option("--patience", fit.patience, "Cycles without improvement before stopping")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-improvement", fit.min_improvement,
                  "Cost drop (nats) that counts as an improvement")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-cycles", fit.max_cycles, "Safety cap on cycles")
      ->check(CLI::PositiveNumber);
}

int fail(const std::string& type, const std::string& message, int code) {
  std::cerr << kstar::cli::error_record(type, message).dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = kstar::cli;
  CLI::App app{"kstar: k*-means clustering and experiment harness"};
  app.require_subcommand(1);

  std::uint64_t seed = kstar::kDefaultSeed;
  std::string output;
  std::string assignments;
  std::string label_col;

  cli::ClusterOptions cluster;
  auto* cmd_cluster = app.add_subcommand("cluster", "Fit k*-means to a CSV of features");
  cmd_cluster->add_option("--input", cluster.input, "Feature CSV")->required();
  cmd_cluster->add_option("--output", output, "JSON result path (stdout when omitted)");
  cmd_cluster->add_option("--assignments", assignments,
                          "Assignments CSV (default: <output>.assignments.csv)");
  cmd_cluster->add_option("--label-col", label_col, "Column to exclude from the features");
  cmd_cluster->add_option("--seed", seed, "Random seed");
  add_fit_flags(cmd_cluster, cluster.fit);

  cli::SweepOptions sweep;
  auto* cmd_sweep = app.add_subcommand("sweep-bic", "Sweep k with Lloyd's k-means, select by BIC");
  cmd_sweep->add_option("--input", sweep.input, "Feature CSV")->required();
  cmd_sweep->add_option("--output", output, "JSON result path (stdout when omitted)");
  cmd_sweep->add_option("--assignments", assignments, "Assignments CSV path");
  cmd_sweep->add_option("--label-col", label_col, "Column to exclude from the features");
  cmd_sweep->add_option("--seed", seed, "Random seed");
  cmd_sweep->add_option("--grid", sweep.grid, "Candidate k values (default: 10% steps of N)")
      ->delimiter(',');

  cli::SynthOptions synth;
  auto* cmd_synth = app.add_subcommand("synth", "Synthetic k-recovery experiment");
  cmd_synth->add_option("--k-max", synth.k_max, "Largest true k (k runs 1..k-max)");
  cmd_synth->add_option("--seps", synth.seps, "Minimum centroid separations")->delimiter(',');
  cmd_synth->add_option("--reps", synth.reps, "Repetitions per (k, sep) cell");
  cmd_synth->add_option("--points", synth.points, "Points per instance");
  cmd_synth->add_option("--seed", seed, "Base random seed");
  cmd_synth->add_option("--algorithms", synth.algorithms, "kstar and/or sweep-bic")
      ->delimiter(',');
  cmd_synth->add_option("--output", output, "Output directory")->required();
  add_fit_flags(cmd_synth, synth.fit);

  cli::EvalOptions eval;
  auto* cmd_eval = app.add_subcommand("eval", "Cluster a labelled CSV and score ACC/ARI/NMI");
  cmd_eval->add_option("--input", eval.input, "Labelled CSV")->required();
  cmd_eval->add_option("--label-col", label_col, "Label column (index or header name)")
      ->required();
  cmd_eval->add_option("--output", output, "JSON result path (stdout when omitted)");
  cmd_eval->add_option("--seed", seed, "Random seed");
  cmd_eval->add_option("--algorithms", eval.algorithms, "kstar, sweep-bic, lloyd (true k)")
      ->delimiter(',');
  add_fit_flags(cmd_eval, eval.fit);

  cli::BenchOptions bench;
  auto* cmd_bench = app.add_subcommand("bench", "Time algorithms on random subsets");
  cmd_bench->add_option("--input", bench.input, "Feature CSV")->required();
  cmd_bench->add_option("--sizes", bench.sizes, "Subset sizes")->delimiter(',')->required();
  cmd_bench->add_option("--reps", bench.reps, "Repetitions per size");
  cmd_bench->add_option("--seed", seed, "Random seed");
  cmd_bench->add_option("--algorithms", bench.algorithms, "kstar, lloyd, sweep-bic")
      ->delimiter(',');
  cmd_bench->add_option("--label-col", label_col, "Label column (enables lloyd with true k)");
  cmd_bench->add_option("--output", output, "Timing CSV path");
  add_fit_flags(cmd_bench, bench.fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what(), 2);
  }

  const auto opt_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };
  const auto opt_string = [](const std::string& s) -> std::optional<std::string> {
    if (s.empty()) return std::nullopt;
    return s;
  };

  try {
    cli::Record record;
    bool print = false;
    if (cmd_cluster->parsed()) {
      cluster.fit.seed = seed;
      cluster.output = opt_path(output);
      cluster.assignments = opt_path(assignments);
      cluster.label_column = opt_string(label_col);
      record = cli::run_cluster(cluster);
      print = !cluster.output;
    } else if (cmd_sweep->parsed()) {
      sweep.seed = seed;
      sweep.output = opt_path(output);
      sweep.assignments = opt_path(assignments);
      sweep.label_column = opt_string(label_col);
      record = cli::run_sweep(sweep);
      print = !sweep.output;
    } else if (cmd_synth->parsed()) {
      synth.seed = seed;
      synth.output_dir = output;
      record = cli::run_synth(synth);
      print = true;
    } else if (cmd_eval->parsed()) {
      eval.seed = seed;
      eval.label_column = label_col;
      eval.output = opt_path(output);
      record = cli::run_eval(eval);
      print = !eval.output;
    } else if (cmd_bench->parsed()) {
      bench.seed = seed;
      bench.label_column = opt_string(label_col);
      bench.output = opt_path(output);
      record = cli::run_bench(bench);
      print = true;
    }
    if (print) std::cout << record.dump(2) << "\n";
  } catch (const cli::UsageError& e) {
    return fail("usage_error", e.what(), 2);
  } catch (const kstar::ParseError& e) {
    return fail("parse_error", e.what(), 1);
  } catch (const kstar::ContractError& e) {
    return fail("invalid_input", e.what(), 1);
  } catch (const kstar::ConvergenceError& e) {
    return fail("convergence_error", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("error", e.what(), 1);
  }
  return 0;
}
