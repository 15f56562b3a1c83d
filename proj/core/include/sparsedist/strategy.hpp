#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sparsedist/csr.hpp"

namespace sparsedist {

enum class StrategyKind {
  Auto,
  /// One (A row, B row) pair per step, merging the two sorted column lists.
  NaiveMerge,
  /// Row of the resident side scattered into a dense n_cols accumulator;
  /// the other side's nonzeros are streamed in COO order.
  BalancedDense,
  /// Same streaming, with the resident row held in an open-addressing hash
  /// table of fixed capacity; rows above the load budget are split.
  BalancedHash,
};

std::string_view to_string(StrategyKind kind) noexcept;
StrategyKind parse_strategy(std::string_view name);

struct ExecutionStrategy {
  StrategyKind kind = StrategyKind::Auto;
  /// Hash table slots per worker (BalancedHash). 0 picks one from the data.
  std::size_t accumulator_capacity = 0;
  double max_load_factor = 0.5;
  /// 0 = std::thread::hardware_concurrency().
  std::size_t workers = 0;

  static ExecutionStrategy naive() { return {StrategyKind::NaiveMerge}; }
  static ExecutionStrategy dense() { return {StrategyKind::BalancedDense}; }
  static ExecutionStrategy hash(std::size_t capacity = 0, double load = 0.5) {
    return {StrategyKind::BalancedHash, capacity, load};
  }
};

/// Throws InvalidParam for a load factor outside (0, 1], a hash capacity
/// below 2, or a load budget under one entry.
void validate(const ExecutionStrategy& s);

inline constexpr std::size_t kDenseColumnLimit = 16384;
inline constexpr std::size_t kMaxHashCapacity = 16384;

/// Replaces Auto and a zero hash capacity with concrete choices:
/// dense accumulator when n_cols <= 16384, otherwise a hash table sized to
/// the next power of two >= 2 * max row degree (capped at 16384; longer
/// rows get chunked). The worker count is resolved as well.
ExecutionStrategy resolve(const ExecutionStrategy& s, const CsrView& a, const CsrView& b);

/// Largest number of entries a hash accumulator may hold at once.
std::size_t load_budget(const ExecutionStrategy& s);

/// Half-open range of positions within one row's stored entries.
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Splits a row of `degree` entries into the fewest equal-count chunks that
/// each fit the load budget. Sizes differ by at most one, larger first.
/// A row that fits (including an empty one) is a single chunk.
std::vector<Chunk> plan_chunks(std::size_t degree, const ExecutionStrategy& s);

struct WorkspaceReport {
  /// Most entries resident in any single accumulator at once.
  std::size_t peak_accumulator_entries = 0;
  /// Staging elements for the streamed side (its COO row-id array).
  std::size_t workspace_elements = 0;
  /// (resident row chunk, streamed block) units executed.
  std::size_t chunks_executed = 0;
  /// Slots per worker accumulator: n_cols for dense, capacity for hash.
  std::size_t accumulator_slots = 0;
  std::size_t workers = 0;

  double peak_load_factor() const noexcept {
    return accumulator_slots == 0 ? 0.0
                                  : static_cast<double>(peak_accumulator_entries) /
                                        static_cast<double>(accumulator_slots);
  }

  /// Combines reports of consecutive passes: peaks take the max, counts add.
  WorkspaceReport& merge(const WorkspaceReport& other) noexcept;
};

}  // namespace sparsedist
