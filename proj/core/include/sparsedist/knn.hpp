#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparsedist/csr.hpp"
#include "sparsedist/metrics.hpp"
#include "sparsedist/strategy.hpp"

namespace sparsedist {

/// Row-major m x k neighbor lists. Distances are non-decreasing along each
/// row; equal distances are ordered by ascending index id.
struct NeighborResult {
  std::size_t n_queries = 0;
  std::size_t k = 0;
  std::vector<double> distances;
  std::vector<std::size_t> indices;

  std::span<const double> distances_row(std::size_t q) const { return {distances.data() + q * k, k}; }
  std::span<const std::size_t> indices_row(std::size_t q) const { return {indices.data() + q * k, k}; }

  friend bool operator==(const NeighborResult&, const NeighborResult&) = default;
};

struct TopK {
  std::vector<double> distances;
  std::vector<std::size_t> indices;
};

/// The k smallest values in ascending order, ties broken by ascending
/// position. Throws KTooLarge when k exceeds the input length.
TopK select_topk(std::span<const double> row_distances, std::size_t k);

struct BatchPlan {
  std::size_t batch_rows = 1;
  std::size_t n_batches = 0;
  /// Dense output elements materialized per batch (batch_rows * n_index).
  std::size_t elements_per_batch = 0;
};

inline constexpr std::size_t kDefaultBatchBudgetBytes = std::size_t{256} << 20;

/// batch_rows = 0 picks the largest batch whose dense output fits
/// `budget_bytes`.
BatchPlan plan_batches(std::size_t n_queries, std::size_t n_index, std::size_t batch_rows,
                       std::size_t budget_bytes = kDefaultBatchBudgetBytes);

struct KnnTimings {
  PhaseTimings distance;
  double topk = 0.0;
};

struct KnnRun {
  NeighborResult result;
  WorkspaceReport workspace;
  KnnTimings timings;
  BatchPlan plan;
  ExecutionStrategy strategy;
};

/// Brute-force k nearest index rows for every query row, computed batch by
/// batch. Self matches are kept. Throws KTooLarge or DimensionMismatch.
NeighborResult kneighbors(const CsrView& index, const CsrView& queries, std::size_t k, const MetricSpec& spec,
                          const ExecutionStrategy& strat = {}, std::size_t batch_rows = 0);

KnnRun kneighbors_run(const CsrView& index, const CsrView& queries, std::size_t k, const MetricSpec& spec,
                      const ExecutionStrategy& strat = {}, std::size_t batch_rows = 0);

}  // namespace sparsedist
