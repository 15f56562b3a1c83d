#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "sparsedist/csr.hpp"

namespace sparsedist {

/// L0 counts stored nonzeros. Sum is the signed element sum, which the
/// correlation expansion needs for data with negative entries.
enum class NormKind { L0, L1, L2, L2Squared, Sum };

std::string_view to_string(NormKind kind) noexcept;

struct NormVector {
  NormKind kind = NormKind::L2;
  std::vector<double> values;
};

/// Per-row reduction in column order. Sums start from 0.0 and accumulate
/// left to right, the same order the engine uses for a row dotted with
/// itself, so ||x||^2 == <x, x> bit for bit.
NormVector row_norms(const CsrView& m, NormKind kind);

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  /// histogram[d] = number of rows with degree d; sums to n_rows.
  std::vector<std::size_t> histogram;
};

DegreeStats degree_stats(const CsrView& m);

}  // namespace sparsedist
