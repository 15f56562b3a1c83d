#include "sparsedist/strategy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "sparsedist/error.hpp"

namespace sparsedist {

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Auto: return "auto";
    case StrategyKind::NaiveMerge: return "naive";
    case StrategyKind::BalancedDense: return "dense";
    case StrategyKind::BalancedHash: return "hash";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "auto") return StrategyKind::Auto;
  if (name == "naive") return StrategyKind::NaiveMerge;
  if (name == "dense") return StrategyKind::BalancedDense;
  if (name == "hash") return StrategyKind::BalancedHash;
  throw Error(Errc::InvalidParam, "unknown strategy '" + std::string(name) + "' (auto|naive|dense|hash)");
}

void validate(const ExecutionStrategy& s) {
  if (!(s.max_load_factor > 0.0 && s.max_load_factor <= 1.0)) {
    throw Error(Errc::InvalidParam, "max_load_factor must be in (0, 1]");
  }
  if (s.kind == StrategyKind::BalancedHash && s.accumulator_capacity == 1) {
    throw Error(Errc::InvalidParam, "hash accumulator capacity must be >= 2");
  }
  if (s.kind == StrategyKind::BalancedHash && s.accumulator_capacity != 0 &&
      s.max_load_factor * static_cast<double>(s.accumulator_capacity) < 1.0) {
    throw Error(Errc::InvalidParam, "load factor " + std::to_string(s.max_load_factor) + " leaves no room in " +
                                        std::to_string(s.accumulator_capacity) + " slots");
  }
}

namespace {

std::size_t max_degree(const CsrView& m) {
  std::size_t d = 0;
  for (std::size_t r = 0; r < m.n_rows(); ++r) d = std::max(d, m.degree(r));
  return d;
}

}  // namespace

ExecutionStrategy resolve(const ExecutionStrategy& s, const CsrView& a, const CsrView& b) {
  validate(s);
  ExecutionStrategy out = s;
  if (out.kind == StrategyKind::Auto) {
    out.kind = a.n_cols() <= kDenseColumnLimit ? StrategyKind::BalancedDense : StrategyKind::BalancedHash;
  }
  if (out.kind == StrategyKind::BalancedHash && out.accumulator_capacity == 0) {
    // Both sides become resident: A in the first pass, B in the second.
    const std::size_t deg = std::max<std::size_t>(1, std::max(max_degree(a), max_degree(b)));
    out.accumulator_capacity = std::min(kMaxHashCapacity, std::bit_ceil(2 * deg));
  }
  if (out.workers == 0) out.workers = std::max(1U, std::thread::hardware_concurrency());
  return out;
}

std::size_t load_budget(const ExecutionStrategy& s) {
  const auto cap = s.accumulator_capacity;
  auto budget = static_cast<std::size_t>(std::floor(s.max_load_factor * static_cast<double>(cap)));
  budget = std::min(budget, cap > 0 ? cap - 1 : 0);
  return std::max<std::size_t>(1, budget);
}

std::vector<Chunk> plan_chunks(std::size_t degree, const ExecutionStrategy& s) {
  const std::size_t budget = load_budget(s);
  if (degree <= budget) return {Chunk{0, degree}};
  const std::size_t n = (degree + budget - 1) / budget;
  const std::size_t base = degree / n;
  const std::size_t extra = degree % n;
  std::vector<Chunk> chunks;
  chunks.reserve(n);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t len = base + (t < extra ? 1 : 0);
    chunks.push_back({pos, pos + len});
    pos += len;
  }
  return chunks;
}

WorkspaceReport& WorkspaceReport::merge(const WorkspaceReport& other) noexcept {
  peak_accumulator_entries = std::max(peak_accumulator_entries, other.peak_accumulator_entries);
  workspace_elements = std::max(workspace_elements, other.workspace_elements);
  chunks_executed += other.chunks_executed;
  accumulator_slots = std::max(accumulator_slots, other.accumulator_slots);
  workers = std::max(workers, other.workers);
  return *this;
}

}  // namespace sparsedist
