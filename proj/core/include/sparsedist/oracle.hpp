#pragma once

// Dense brute-force reference for every distance in the catalog. Formulas
// are evaluated literally over all k columns with no sparsity shortcuts and
// share no code with the semiring engine or the expansion functions; tests
// and the `verify` command use this as the arbiter.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sparsedist/csr.hpp"

namespace sparsedist::oracle {

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

inline constexpr std::size_t kDefaultElementCap = std::size_t{1} << 26;

/// Throws SizeOverflow when rows * cols exceeds `element_cap`.
DenseMatrix densify(const CsrMatrix& m, std::size_t element_cap = kDefaultElementCap);

/// Nonzero entries of a dense matrix as a canonical CSR matrix.
CsrMatrix sparsify(const DenseMatrix& d);

struct OracleParams {
  std::optional<double> p;
  bool strict = true;
};

/// Direct evaluation of the named distance between two dense vectors.
/// Conventions: 0/0 Canberra terms and 0*log(0) terms are 0; rows with a zero
/// denominator in cosine/correlation/dice/jaccard give 0 if both are all
/// zero and 1 otherwise; KL with x_i > 0 = y_i raises DomainError (strict)
/// or returns 1e308.
double oracle_distance(std::span<const double> a, std::span<const double> b, std::string_view metric,
                       const OracleParams& params = {});

/// oracle_distance for every (row of a, row of b).
DenseMatrix oracle_pairwise(const DenseMatrix& a, const DenseMatrix& b, std::string_view metric,
                            const OracleParams& params = {});

/// Exhaustive min-plus product: C_ij = min over columns stored in both rows
/// of a_ic + b_jc, +inf when there is none. Zeros of the dense inputs mean
/// "no entry".
DenseMatrix min_plus(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace sparsedist::oracle
