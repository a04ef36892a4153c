// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. `--paper-scale` additionally runs the full
// 50 x 10 synthetic grid at d_sep = 5.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "kstar/baselines.hpp"
#include "kstar/kstar_means.hpp"
#include "kstar/mdl.hpp"
#include "kstar/metrics.hpp"
#include "kstar/synth.hpp"
#include "oracles.hpp"

using namespace kstar;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const Outcome& o) {
  std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t predict_kstar(const Dataset& data, std::uint64_t seed) {
  FitConfig cfg;
  cfg.seed = seed;
  return fit(data, cfg).k();
}

KRecoveryReport desk_grid(const std::vector<double>& seps) {
  KRecoveryOptions opts;
  opts.k_values.resize(20);
  std::iota(opts.k_values.begin(), opts.k_values.end(), std::size_t{1});
  opts.sep_values = seps;
  opts.reps = 5;
  opts.total_points = 1000;
  opts.base_seed = 2024;
  return k_recovery_experiment(opts, predict_kstar);
}

// Fixture generator for the property criteria: mixtures of blobs and
// uniform noise, N <= 50, d <= 3.
oracle::Points random_fixture(std::mt19937_64& gen, std::size_t max_n) {
  const std::size_t n = 1 + gen() % max_n;
  const std::size_t d = 1 + gen() % 3;
  if (gen() % 3 == 0) return oracle::random_points(gen, n, d, 1.0 + static_cast<double>(gen() % 20));
  return oracle::random_blobs(gen, n, d);
}

Outcome criterion_exact_delta() {
  std::mt19937_64 gen(3003);
  std::size_t splits = 0, merges = 0;
  double worst = 0.0;
  for (int fixture = 0; fixture < 200; ++fixture) {
    const Dataset data = Dataset::from_rows(random_fixture(gen, 50));
    const PrecisionInfo precision = precision_info(data);
    double previous = 0.0;
    FitConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(fixture);
    cfg.strict_convergence = fixture % 2 == 1;
    fit(data, cfg, [&](const StepEvent& e) {
      const double now = mdl_cost(data, e.model.centroids, e.model.assignments, precision).total;
      if (e.kind == StepKind::kSplit || e.kind == StepKind::kMerge) {
        (e.kind == StepKind::kSplit ? splits : merges) += 1;
        const double rel = std::fabs(e.delta - (now - previous)) / std::fabs(previous);
        worst = std::max(worst, rel);
      }
      previous = now;
    });
  }
  return {worst <= 1e-9 && splits > 0 && merges > 0,
          fmt("%zu splits, %zu merges, worst relative error %.3g (tol 1e-9)", splits, merges,
              worst)};
}

Outcome criterion_monotone() {
  std::mt19937_64 gen(4004);
  std::size_t steps = 0, violations = 0, unterminated = 0;
  double worst = 0.0;
  for (int fixture = 0; fixture < 100; ++fixture) {
    const Dataset data = Dataset::from_rows(random_fixture(gen, 50));
    const PrecisionInfo precision = precision_info(data);
    for (bool strict : {false, true}) {
      FitConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(fixture);
      cfg.strict_convergence = strict;
      double previous = INFINITY;
      try {
        fit(data, cfg, [&](const StepEvent& e) {
          const double now =
              mdl_cost(data, e.model.centroids, e.model.assignments, precision).total;
          if (std::isfinite(previous)) {
            ++steps;
            const double rise = (now - previous) / std::fabs(previous);
            worst = std::max(worst, rise);
            violations += rise > 1e-6;
          }
          previous = now;
        });
      } catch (const ConvergenceError&) {
        ++unterminated;
      }
    }
  }
  return {violations == 0 && unterminated == 0,
          fmt("%zu steps recosted, %zu increases (worst relative rise %.3g, tol 1e-6), "
              "%zu strict runs hit max_cycles",
              steps, violations, worst, unterminated)};
}

Outcome criterion_brute_force() {
  std::mt19937_64 gen(5005);
  double worst = 0.0;
  std::size_t exact = 0;
  for (int fixture = 0; fixture < 50; ++fixture) {
    const oracle::Points pts = random_fixture(gen, 8);
    const Dataset data = Dataset::from_rows(pts);
    const PrecisionInfo precision = precision_info(data);
    const auto best = oracle::best_partition(pts, precision.bits_per_coord);
    FitConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(fixture);
    const FitResult r = fit(data, cfg);
    const double got = oracle::partition_cost(pts, r.model.assignments, precision.bits_per_coord);
    worst = std::max(worst, (got - best.cost) / std::fabs(best.cost));
    exact += oracle::same_partition(r.model.assignments, best.labels);
  }
  const oracle::Points pairs{{0}, {0.1}, {10}, {10.1}};
  const Dataset pair_data = Dataset::from_rows(pairs);
  const auto pair_best = oracle::best_partition(pairs, precision_info(pair_data).bits_per_coord);
  const bool pairs_exact = oracle::same_partition(fit(pair_data).model.assignments, pair_best.labels);
  return {worst <= 0.05 && pairs_exact,
          fmt("worst excess over optimum %.4f%% (tol 5%%), %zu/50 exact, two-pairs fixture %s",
              100 * worst, exact, pairs_exact ? "optimal" : "NOT optimal")};
}

Outcome criterion_metric_oracles() {
  std::mt19937_64 gen(6006);
  double worst = 0.0;
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t n = 2 + gen() % 7;
    std::vector<std::size_t> a(n), b(n);
    const std::size_t ka = 1 + gen() % n, kb = 1 + gen() % n;
    for (auto& x : a) x = gen() % ka;
    for (auto& x : b) x = gen() % kb;
    const ContingencyTable t = contingency(a, b);
    worst = std::max({worst, std::fabs(accuracy(t) - oracle::accuracy_exhaustive(a, b)),
                      std::fabs(ari(t) - oracle::ari_pair_counting(a, b)),
                      std::fabs(nmi(t) - oracle::nmi_direct(a, b))});
  }
  return {worst <= 1e-12, fmt("1000 labelings, worst deviation %.3g (tol 1e-12)", worst)};
}

Outcome criterion_sweep() {
  std::size_t good = 0;
  std::string ks, ratios;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.true_k = 10;
    spec.min_sep = 5.0;
    spec.total_points = 1000;
    spec.seed = derive_seed(7007, seed);
    const SynthInstance inst = generate(spec);

    FitConfig cfg;
    cfg.seed = seed;
    const auto t0 = Clock::now();
    const FitResult kstar_fit = fit(inst.data, cfg);
    const double kstar_time = seconds(t0);

    Rng rng(seed);
    const auto t1 = Clock::now();
    const SweepReport sweep = sweep_k_bic(inst.data, rng);
    const double sweep_time = seconds(t1);

    const double ratio = sweep_time / kstar_time;
    good += sweep.chosen_k >= 10 && ratio >= 5.0;
    ks += (ks.empty() ? "" : ",") + std::to_string(sweep.chosen_k);
    ratios += (ratios.empty() ? "" : ",") + fmt("%.0f", ratio);
    (void)kstar_fit;
  }
  return {good >= 8, fmt("%zu/10 seeds qualify (need 8); sweep k = [%s]; time ratio = [%s]", good,
                         ks.c_str(), ratios.c_str())};
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Outcome criterion_scaling() {
  const std::vector<std::size_t> sizes{1000, 2000, 5000, 10000, 20000};
  constexpr int kReps = 3;
  std::vector<double> ns, kstar_means, lloyd_means;
  double slowest = 0.0;
  bool lloyd_faster = true;
  std::string detail;
  for (std::size_t size : sizes) {
    double kstar_total = 0, lloyd_total = 0;
    for (int rep = 0; rep < kReps; ++rep) {
      SynthSpec spec;
      spec.true_k = 10;
      spec.min_sep = 5.0;
      spec.total_points = size;
      spec.seed = derive_seed(8008, size, static_cast<std::uint64_t>(rep));
      const SynthInstance inst = generate(spec);

      FitConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(rep);
      auto t0 = Clock::now();
      fit(inst.data, cfg);
      const double kt = seconds(t0);
      slowest = std::max(slowest, kt);
      kstar_total += kt;

      Rng rng(static_cast<std::uint64_t>(rep));
      t0 = Clock::now();
      lloyd(inst.data, spec.true_k, rng);
      lloyd_total += seconds(t0);
    }
    ns.push_back(static_cast<double>(size));
    kstar_means.push_back(kstar_total / kReps);
    lloyd_means.push_back(lloyd_total / kReps);
    lloyd_faster &= lloyd_means.back() < kstar_means.back();
    detail += fmt("N=%zu kstar %.4fs lloyd %.4fs; ", size, kstar_means.back(), lloyd_means.back());
  }
  const double rho = spearman(ns, kstar_means);
  return {slowest < 30.0 && rho > 0.8 && lloyd_faster,
          detail + fmt("slowest kstar %.3fs (limit 30s), spearman %.2f (need > 0.8), lloyd faster "
                       "at every size: %s",
                       slowest, rho, lloyd_faster ? "yes" : "no")};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timing(const fs::path& json_path) {
  auto j = nlohmann::ordered_json::parse(read_file(json_path));
  j.erase("timing");
  return j.dump();
}

// Drops the trailing `seconds` column of the cells CSV.
std::string without_seconds(const fs::path& csv_path) {
  std::istringstream in(read_file(csv_path));
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "kstar_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SynthSpec spec;
  spec.true_k = 7;
  spec.min_sep = 4.0;
  spec.seed = 9009;
  const SynthInstance inst = generate(spec);
  {
    std::ofstream out(dir / "data.csv");
    out.precision(17);
    for (std::size_t i = 0; i < inst.data.n(); ++i) {
      out << inst.data.point(i)[0] << "," << inst.data.point(i)[1] << "\n";
    }
  }

  bool same = true;
  std::vector<std::string> cluster_payloads, cluster_csvs, synth_payloads, synth_cells;
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    cli::ClusterOptions c;
    c.input = dir / "data.csv";
    c.output = dir / ("cluster" + tag + ".json");
    c.fit.seed = 42;
    cli::run_cluster(c);
    cluster_payloads.push_back(without_timing(*c.output));
    cluster_csvs.push_back(read_file(dir / ("cluster" + tag + ".assignments.csv")));

    cli::SynthOptions s;
    s.k_max = 6;
    s.seps = {2.0, 5.0};
    s.reps = 2;
    s.seed = 42;
    s.algorithms = {"kstar", "sweep-bic"};
    s.points = 300;
    s.output_dir = dir / ("synth" + tag);
    cli::run_synth(s);
    synth_payloads.push_back(without_timing(s.output_dir / "summary.json"));
    synth_cells.push_back(without_seconds(s.output_dir / "cells.csv"));
  }
  same &= cluster_payloads[0] == cluster_payloads[1];
  same &= cluster_csvs[0] == cluster_csvs[1];
  same &= synth_payloads[0] == synth_payloads[1];
  same &= synth_cells[0] == synth_cells[1];
  fs::remove_all(dir);
  return {same, same ? "cluster JSON/CSV and synth summary/cells identical across reruns"
                     : "rerun payloads differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const bool paper_scale = argc > 1 && std::string(argv[1]) == "--paper-scale";

  const auto t0 = Clock::now();
  const KRecoveryReport grid = desk_grid({2.0, 5.0});
  const KRecoverySummary strong = grid.per_sep.at(5.0);
  const KRecoverySummary weak = grid.per_sep.at(2.0);
  const double grid_time = seconds(t0);

  report("C1", "k-recovery, d_sep=5",
         {strong.accuracy >= 0.90 && strong.mse <= 0.5,
          fmt("accuracy %.3f (need >= 0.90), mse %.3f (need <= 0.5) over %zu runs; grid %.1fs",
              strong.accuracy, strong.mse, strong.runs, grid_time)});
  report("C2", "separation trend",
         {strong.accuracy - weak.accuracy >= 0.3,
          fmt("accuracy d_sep=2 %.3f, d_sep=5 %.3f, gap %.3f (need >= 0.3)", weak.accuracy,
              strong.accuracy, strong.accuracy - weak.accuracy)});
  report("C3", "exact split/merge deltas", criterion_exact_delta());
  report("C4", "monotone MDL and strict termination", criterion_monotone());
  report("C5", "brute-force optimality on N <= 8", criterion_brute_force());
  report("C6", "metric oracles", criterion_metric_oracles());
  report("C7", "sweep-BIC overshoots and is slower", criterion_sweep());
  report("C8", "runtime scaling", criterion_scaling());
  report("C9", "determinism of cluster and synth", criterion_determinism());

  if (paper_scale) {
    KRecoveryOptions opts;
    opts.k_values.resize(50);
    std::iota(opts.k_values.begin(), opts.k_values.end(), std::size_t{1});
    opts.sep_values = {5.0};
    opts.reps = 10;
    opts.base_seed = 2025;
    const KRecoverySummary full = k_recovery_experiment(opts, predict_kstar).per_sep.at(5.0);
    report("C1-full", "paper-scale k-recovery, d_sep=5",
           {full.accuracy >= 0.95,
            fmt("accuracy %.3f (target >= 0.95), mse %.3f over %zu runs", full.accuracy, full.mse,
                full.runs)});
  }

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
