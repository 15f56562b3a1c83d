#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsedist/io/generate.hpp"
#include "sparsedist/knn.hpp"
#include "sparsedist/metrics.hpp"
#include "sparsedist/strategy.hpp"

namespace sparsedist::io {

/// Options shared by the CLI subcommands. Fields a command does not use are
/// ignored.
struct RunConfig {
  std::string command;
  std::string metric = "euclidean";
  MetricParams metric_params;
  ExecutionStrategy strategy;
  /// bench only: every strategy listed is timed on the same input.
  std::vector<StrategyKind> bench_strategies = {StrategyKind::NaiveMerge, StrategyKind::BalancedDense,
                                                StrategyKind::BalancedHash};
  std::size_t k = 10;
  std::size_t batch_rows = 0;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> input_b;
  std::optional<std::filesystem::path> output;
  /// bench without --input generates its dataset from this spec.
  std::optional<GenSpec> gen;
  /// bench: query only the first N rows of the dataset (0 = all rows).
  std::size_t query_rows = 0;
  std::size_t repeat = 1;
};

/// FNV-1a over values rounded to multiples of `quantum` (and over the
/// neighbor ids, for the kNN overload).
std::uint64_t quantized_checksum(std::span<const double> values, double quantum = 1e-8);
std::uint64_t quantized_checksum(const NeighborResult& r, double quantum = 1e-8);

struct BenchRun {
  ExecutionStrategy strategy;
  KnnTimings timings;
  /// Fastest end-to-end query time over the repeats; timings belong to it.
  double query_seconds = 0.0;
  WorkspaceReport workspace;
  std::uint64_t checksum = 0;
};

struct BenchReport {
  std::string metric;
  std::size_t index_rows = 0;
  std::size_t query_rows = 0;
  std::size_t n_cols = 0;
  std::size_t nnz = 0;
  std::size_t k = 0;
  std::size_t repeat = 0;
  BatchPlan plan;
  double load_seconds = 0.0;
  std::vector<BenchRun> runs;

  std::string to_json() const;
};

/// Loads (or generates) the dataset, then times kneighbors(X, X[:q], k) for
/// each strategy. Load time is reported but excluded from query time.
BenchReport run_bench(const RunConfig& config);

struct VerifyReport {
  std::string metric;
  std::size_t trials = 0;
  std::size_t cells = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  std::size_t failures = 0;
  bool passed() const noexcept { return failures == 0; }
};

/// Random small instances (up to max_rows x max_cols, densities 5-50%,
/// binary data for the set metrics, non-negative otherwise) compared against
/// the dense oracle at 1e-6 relative / 1e-9 absolute.
VerifyReport run_verify(const std::string& metric, const MetricParams& params, const ExecutionStrategy& strat,
                        std::size_t trials, std::size_t max_rows, std::size_t max_cols, std::uint64_t seed);

}  // namespace sparsedist::io
