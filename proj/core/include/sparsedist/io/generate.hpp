#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sparsedist/csr.hpp"

namespace sparsedist::io {

/// Per-row degree law for synthetic matrices.
struct DegreeDist {
  enum class Kind { Uniform, Zipf };
  Kind kind = Kind::Uniform;
  /// Uniform: every row stores exactly `degree` distinct columns.
  std::size_t degree = 0;
  /// Zipf: P(d) proportional to d^-exponent for d in [1, max_degree].
  double exponent = 1.0;
  std::size_t max_degree = 1;

  static DegreeDist uniform(std::size_t d) { return {Kind::Uniform, d, 1.0, 1}; }
  static DegreeDist zipf(double s, std::size_t max_deg) { return {Kind::Zipf, 0, s, max_deg}; }

  /// Accepts "uniform:D", "zipf:S:MAX" and "density:F" (F in [0,1],
  /// resolved to uniform:round(F * n_cols)).
  static DegreeDist parse(std::string_view text, std::size_t n_cols);

  double mean() const;
  /// P(degree <= d).
  double cdf(std::size_t d) const;
};

enum class ValueDist {
  /// Uniform on (0, 1].
  Uniform01,
  /// (1 + log tf) * idf with geometric term counts and an idf that decays
  /// with the column id; strictly positive.
  TfIdf,
};

ValueDist parse_value_dist(std::string_view name);

struct GenSpec {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  DegreeDist degrees;
  ValueDist values = ValueDist::Uniform01;
  std::uint64_t seed = 0;
};

/// Canonical random matrix; identical output for identical specs. Columns
/// of each row are drawn uniformly without replacement. Throws InvalidSpec.
CsrMatrix generate(const GenSpec& spec);

}  // namespace sparsedist::io
