#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kstar/dataset.hpp"
#include "kstar/error.hpp"
#include "kstar/kstar_means.hpp"
#include "kstar/random.hpp"

namespace kstar::cli {

inline constexpr int kSchemaVersion = 1;

// Every command returns a record of this shape:
//   { schema_version, command, config, result, timing }
// `timing` holds the only fields that differ between identical reruns.
using Record = nlohmann::ordered_json;

struct ClusterOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;       // JSON record
  std::optional<std::filesystem::path> assignments;  // defaults next to output
  std::optional<std::string> label_column;           // excluded from features
  FitConfig fit;
};

struct SweepOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> assignments;
  std::optional<std::string> label_column;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::size_t> grid;  // empty: default 10% grid
};

struct SynthOptions {
  std::size_t k_max = 50;
  std::vector<double> seps = {2.0, 3.0, 4.0, 5.0};
  std::size_t reps = 10;
  std::size_t points = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> algorithms = {"kstar"};
  std::filesystem::path output_dir = "synth_out";
  FitConfig fit;  // seed field is replaced per cell
};

struct EvalOptions {
  std::filesystem::path input;
  std::string label_column;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> algorithms = {"kstar"};
  FitConfig fit;
};

struct BenchOptions {
  std::filesystem::path input;
  std::vector<std::size_t> sizes;
  std::size_t reps = 3;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> algorithms = {"kstar", "lloyd", "sweep-bic"};
  std::optional<std::string> label_column;
  std::optional<std::filesystem::path> output;  // timing CSV
  FitConfig fit;
};

Record run_cluster(const ClusterOptions& options);
Record run_sweep(const SweepOptions& options);
Record run_synth(const SynthOptions& options);
Record run_eval(const EvalOptions& options);
Record run_bench(const BenchOptions& options);

// "3" selects column 3; anything else is a header name.
ColumnSelector parse_column(const std::string& text);

// Thrown for invalid flag combinations and values.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Machine-readable error document written to stderr on failure.
Record error_record(const std::string& type, const std::string& message);

}  // namespace kstar::cli
