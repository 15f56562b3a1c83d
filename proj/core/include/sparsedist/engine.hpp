#pragma once

// Generalized pairwise SpMV: evaluates a semiring between every row of A and
// every row of B.
//
// Pass 1 streams the nonzeros of B against a resident copy of each row of A
// and covers the columns stored in B (the intersection plus the B-only
// columns). Pass 2 commutes the operands, streams A against each resident
// row of B and only evaluates columns stored in A but not in B. Annihilating
// semirings stop after pass 1 and skip every column absent from A.
//
// Every output cell is reduced by exactly one work item per pass, in
// ascending column order, so results do not depend on the worker count or on
// the strategy chosen.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsedist/csr.hpp"
#include "sparsedist/distance_output.hpp"
#include "sparsedist/error.hpp"
#include "sparsedist/hash_accumulator.hpp"
#include "sparsedist/parallel.hpp"
#include "sparsedist/semiring.hpp"
#include "sparsedist/strategy.hpp"

namespace sparsedist {

struct PairwiseResult {
  DistanceOutput out;
  WorkspaceReport pass1;
  std::optional<WorkspaceReport> pass2;

  WorkspaceReport total() const {
    WorkspaceReport r = pass1;
    if (pass2) r.merge(*pass2);
    return r;
  }
};

inline void check_same_cols(const CsrView& a, const CsrView& b) {
  if (a.n_cols() != b.n_cols()) {
    throw Error(Errc::DimensionMismatch,
                "A has " + std::to_string(a.n_cols()) + " columns, B has " + std::to_string(b.n_cols()));
  }
}

namespace detail {

enum class Pass { First, Second };

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Contiguous rows of the streamed matrix processed as one work unit.
struct StreamBlock {
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
};

/// Groups rows into blocks of roughly equal nonzero count. Blocks never
/// split a row, which keeps each output cell inside a single work item.
std::vector<StreamBlock> partition_stream(const CsrView& m, std::size_t workers);

inline void check_output(const CsrView& a, const CsrView& b, const DistanceOutput& out) {
  if (out.rows() != a.n_rows() || out.cols() != b.n_rows()) {
    throw Error(Errc::DimensionMismatch, "output is " + std::to_string(out.rows()) + "x" +
                                             std::to_string(out.cols()) + ", expected " +
                                             std::to_string(a.n_rows()) + "x" + std::to_string(b.n_rows()));
  }
}

/// Streams the entries [begin, end) of `streamed` against one resident row
/// (or one chunk of it) and reduces the products into the output, flushing
/// the running value whenever the COO row id changes. `lookup(c)` returns
/// the resident value at column c, or 0.0 if it is not stored. Columns
/// outside [lo, hi) belong to another chunk of the resident row and are
/// skipped.
template <Pass P, SemiringOps S, class Lookup>
void stream_segment(const S& s, const CsrView& streamed, std::span<const row_t> stage, offset_t begin, offset_t end,
                    col_t lo, col_t hi, const Lookup& lookup, std::size_t resident_row, DistanceOutput& out) {
  if (begin == end) return;
  const offset_t base = streamed.base();
  const bool skip_absent = s.annihilating();
  auto cell = [&](row_t r) -> double& {
    if constexpr (P == Pass::First) {
      return out(resident_row, r);
    } else {
      return out(r, resident_row);
    }
  };
  row_t cur = stage[begin - base];
  double run = cell(cur);
  for (offset_t t = begin; t < end; ++t) {
    const row_t r = stage[t - base];
    if (r != cur) {
      cell(cur) = run;
      cur = r;
      run = cell(cur);
    }
    const col_t c = streamed.col_at(t);
    if (c < lo || c >= hi) continue;
    const double resident = lookup(c);
    const double v = streamed.value_at(t);
    if constexpr (P == Pass::First) {
      if (resident != 0.0) {
        run = s.reduce(run, s.product(resident, v));
      } else if (!skip_absent) {
        run = s.reduce(run, s.product(0.0, v));
      }
    } else {
      if (resident == 0.0) run = s.reduce(run, s.product(v, 0.0));
    }
  }
  cell(cur) = run;
}

struct DenseWorker {
  std::vector<double> acc;
  std::size_t loaded = kNone;
  std::size_t peak = 0;
  std::size_t chunks = 0;

  void load(const CsrView& m, std::size_t r) {
    if (loaded == r) return;
    if (acc.empty()) acc.assign(m.n_cols(), 0.0);
    if (loaded != kNone) {
      for (col_t c : m.row(loaded).cols) acc[c] = 0.0;
    }
    const RowView row = m.row(r);
    for (std::size_t t = 0; t < row.degree(); ++t) acc[row.cols[t]] = row.vals[t];
    loaded = r;
    peak = std::max(peak, row.degree());
  }
};

struct HashWorker {
  std::optional<HashAccumulator> table;
  std::size_t loaded_row = kNone;
  std::size_t loaded_chunk = kNone;
  std::size_t chunks = 0;
};

template <Pass P, SemiringOps S>
WorkspaceReport balanced_pass(const CsrView& resident, const CsrView& streamed, const S& s,
                              const ExecutionStrategy& strat, DistanceOutput& out) {
  const std::vector<row_t> stage = expand_row_ids(streamed);
  const std::vector<StreamBlock> blocks = partition_stream(streamed, strat.workers);
  const std::size_t n_items = resident.n_rows() * blocks.size();
  const std::size_t n_cols = resident.n_cols();

  WorkspaceReport report;
  report.workspace_elements = stage.size();
  report.workers = strat.workers;

  auto block_range = [&](const StreamBlock& blk) {
    return std::pair{streamed.row_begin(blk.row_begin), streamed.row_begin(blk.row_end)};
  };

  if (strat.kind == StrategyKind::BalancedDense) {
    report.accumulator_slots = n_cols;
    std::vector<DenseWorker> workers(strat.workers);
    parallel_for(n_items, strat.workers, [&](std::size_t w, std::size_t item) {
      const std::size_t r = item / blocks.size();
      const auto [begin, end] = block_range(blocks[item % blocks.size()]);
      if (begin == end) return;
      DenseWorker& dw = workers[w];
      dw.load(resident, r);
      ++dw.chunks;
      const double* acc = dw.acc.data();
      stream_segment<P>(s, streamed, stage, begin, end, col_t{0}, static_cast<col_t>(n_cols),
                        [acc](col_t c) { return acc[c]; }, r, out);
    });
    for (const auto& dw : workers) {
      report.peak_accumulator_entries = std::max(report.peak_accumulator_entries, dw.peak);
      report.chunks_executed += dw.chunks;
    }
    return report;
  }

  report.accumulator_slots = strat.accumulator_capacity;
  std::vector<HashWorker> workers(strat.workers);
  parallel_for(n_items, strat.workers, [&](std::size_t w, std::size_t item) {
    const std::size_t r = item / blocks.size();
    const auto [begin, end] = block_range(blocks[item % blocks.size()]);
    if (begin == end) return;
    HashWorker& hw = workers[w];
    if (!hw.table) hw.table.emplace(strat.accumulator_capacity);
    const RowView row = resident.row(r);
    const std::vector<Chunk> chunks = plan_chunks(row.degree(), strat);
    for (std::size_t k = 0; k < chunks.size(); ++k) {
      const Chunk& ch = chunks[k];
      if (hw.loaded_row != r || hw.loaded_chunk != k) {
        hw.table->build(row.cols.subspan(ch.begin, ch.size()), row.vals.subspan(ch.begin, ch.size()));
        hw.loaded_row = r;
        hw.loaded_chunk = k;
      }
      // Chunks own contiguous column ranges that tile [0, n_cols), so every
      // streamed column is tested against exactly one chunk.
      const col_t lo = k == 0 ? col_t{0} : row.cols[ch.begin];
      const col_t hi = k + 1 == chunks.size() ? static_cast<col_t>(n_cols) : row.cols[chunks[k + 1].begin];
      const HashAccumulator& table = *hw.table;
      stream_segment<P>(s, streamed, stage, begin, end, lo, hi,
                        [&table](col_t c) { return table.probe_or_zero(c); }, r, out);
      ++hw.chunks;
    }
  });
  for (const auto& hw : workers) {
    if (hw.table) report.peak_accumulator_entries = std::max(report.peak_accumulator_entries, hw.table->peak_size());
    report.chunks_executed += hw.chunks;
  }
  return report;
}

/// Pass-1 contribution of one pair: every column stored in b, with a's value
/// found by merging the two sorted column lists.
template <SemiringOps S>
double merge_pass1(const S& s, const RowView& a, const RowView& b, double run) {
  const bool skip_absent = s.annihilating();
  std::size_t p = 0;
  for (std::size_t q = 0; q < b.degree(); ++q) {
    const col_t c = b.cols[q];
    while (p < a.degree() && a.cols[p] < c) ++p;
    if (p < a.degree() && a.cols[p] == c) {
      run = s.reduce(run, s.product(a.vals[p], b.vals[q]));
    } else if (!skip_absent) {
      run = s.reduce(run, s.product(0.0, b.vals[q]));
    }
  }
  return run;
}

/// Pass-2 contribution of one pair: columns stored in a but not in b.
template <SemiringOps S>
double merge_pass2(const S& s, const RowView& a, const RowView& b, double run) {
  std::size_t q = 0;
  for (std::size_t p = 0; p < a.degree(); ++p) {
    const col_t c = a.cols[p];
    while (q < b.degree() && b.cols[q] < c) ++q;
    if (q < b.degree() && b.cols[q] == c) continue;
    run = s.reduce(run, s.product(a.vals[p], 0.0));
  }
  return run;
}

template <SemiringOps S>
WorkspaceReport naive_passes(const CsrView& a, const CsrView& b, const S& s, const ExecutionStrategy& strat,
                             DistanceOutput& out, bool first, bool second) {
  parallel_for(a.n_rows(), strat.workers, [&](std::size_t, std::size_t i) {
    const RowView ra = a.row(i);
    for (std::size_t j = 0; j < b.n_rows(); ++j) {
      const RowView rb = b.row(j);
      double run = out(i, j);
      if (first) run = merge_pass1(s, ra, rb, run);
      if (second) run = merge_pass2(s, ra, rb, run);
      out(i, j) = run;
    }
  });
  WorkspaceReport report;
  report.chunks_executed = a.n_rows() * b.n_rows();
  report.workers = strat.workers;
  return report;
}

}  // namespace detail

/// Reduces into out[i][j] the products over every column stored in B_j
/// (A_i's value is 0 where it stores nothing). For annihilating semirings
/// columns absent from A_i are skipped and this pass is the full result.
/// `out` must be a.n_rows() x b.n_rows() and hold the running values
/// (reduce identity on a fresh output).
template <SemiringOps S>
WorkspaceReport pairwise_spmv_pass1(const CsrView& a, const CsrView& b, const S& s, const ExecutionStrategy& strat,
                                    DistanceOutput& out) {
  check_same_cols(a, b);
  detail::check_output(a, b, out);
  const ExecutionStrategy st = resolve(strat, a, b);
  if (st.kind == StrategyKind::NaiveMerge) return detail::naive_passes(a, b, s, st, out, true, false);
  return detail::balanced_pass<detail::Pass::First>(a, b, s, st, out);
}

/// Reduces into out[i][j] the values product(A_i[c], 0) for the columns c
/// stored in A_i but not in B_j; shared columns were handled by pass 1.
template <SemiringOps S>
WorkspaceReport pairwise_spmv_pass2(const CsrView& a, const CsrView& b, const S& s, const ExecutionStrategy& strat,
                                    DistanceOutput& out) {
  check_same_cols(a, b);
  detail::check_output(a, b, out);
  const ExecutionStrategy st = resolve(strat, a, b);
  if (st.kind == StrategyKind::NaiveMerge) return detail::naive_passes(a, b, s, st, out, false, true);
  return detail::balanced_pass<detail::Pass::Second>(b, a, s, st, out);
}

/// Full pairwise evaluation: pass 1, plus pass 2 when the semiring is not
/// annihilating. A and B may be the same matrix.
template <SemiringOps S>
PairwiseResult pairwise_generalized(const CsrView& a, const CsrView& b, const S& s, const ExecutionStrategy& strat) {
  check_same_cols(a, b);
  const ExecutionStrategy st = resolve(strat, a, b);
  PairwiseResult res{DistanceOutput(a.n_rows(), b.n_rows(), s.reduce_identity()), {}, std::nullopt};
  const bool two_pass = !s.annihilating();
  if (st.kind == StrategyKind::NaiveMerge) {
    // Both passes fused per pair; same per-cell order as running them apart.
    res.pass1 = detail::naive_passes(a, b, s, st, res.out, true, two_pass);
    return res;
  }
  res.pass1 = pairwise_spmv_pass1(a, b, s, st, res.out);
  if (two_pass) res.pass2 = pairwise_spmv_pass2(a, b, s, st, res.out);
  return res;
}

}  // namespace sparsedist
