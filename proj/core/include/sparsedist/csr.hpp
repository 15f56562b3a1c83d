#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sparsedist {

using col_t = std::uint32_t;
using row_t = std::uint32_t;
using offset_t = std::size_t;

/// Uncanonicalized CSR triple as it arrives from a caller or a file.
/// Offsets and indices are signed so that malformed input can be reported
/// instead of wrapping.
struct RawCsr {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::int64_t> indptr;
  std::vector<std::int64_t> indices;
  std::vector<double> values;
};

struct RowView {
  std::span<const col_t> cols;
  std::span<const double> vals;

  std::size_t degree() const noexcept { return cols.size(); }
};

/// Non-owning view over a contiguous block of rows of a CsrMatrix. The
/// indptr entries are absolute offsets into the full index/value arrays, so
/// row slices share storage with their parent.
class CsrView {
 public:
  CsrView() = default;
  CsrView(std::size_t n_rows, std::size_t n_cols, std::span<const offset_t> indptr,
          std::span<const col_t> indices, std::span<const double> values)
      : n_rows_(n_rows), n_cols_(n_cols), indptr_(indptr), indices_(indices), values_(values) {}

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return n_rows_ == 0 ? 0 : indptr_[n_rows_] - indptr_[0]; }

  /// Offset of the first stored entry of this view in the parent arrays.
  offset_t base() const noexcept { return n_rows_ == 0 ? 0 : indptr_[0]; }
  offset_t row_begin(std::size_t r) const noexcept { return indptr_[r]; }
  offset_t row_end(std::size_t r) const noexcept { return indptr_[r + 1]; }
  std::size_t degree(std::size_t r) const noexcept { return indptr_[r + 1] - indptr_[r]; }

  RowView row(std::size_t r) const noexcept {
    const offset_t b = indptr_[r];
    const offset_t e = indptr_[r + 1];
    return {indices_.subspan(b, e - b), values_.subspan(b, e - b)};
  }

  col_t col_at(offset_t off) const noexcept { return indices_[off]; }
  double value_at(offset_t off) const noexcept { return values_[off]; }

  /// Rows [begin, end) as a view; no copy.
  CsrView slice(std::size_t begin, std::size_t end) const noexcept {
    return {end - begin, n_cols_, indptr_.subspan(begin, end - begin + 1), indices_, values_};
  }

  std::span<const col_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::span<const offset_t> indptr_;
  std::span<const col_t> indices_;
  std::span<const double> values_;
};

/// Canonical compressed sparse row matrix: column ids strictly increasing
/// within each row, all ids < n_cols, no stored zeros. Immutable once built.
class CsrMatrix {
 public:
  CsrMatrix() : indptr_(1, 0) {}

  /// Takes ownership of arrays that are already canonical. Throws if they are
  /// not; use validate_and_canonicalize() to repair arbitrary input.
  CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<offset_t> indptr,
            std::vector<col_t> indices, std::vector<double> values);

  /// Empty matrix (nnz = 0) of the given shape.
  static CsrMatrix zeros(std::size_t n_rows, std::size_t n_cols);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return indices_.size(); }
  std::size_t degree(std::size_t r) const noexcept { return indptr_[r + 1] - indptr_[r]; }

  const std::vector<offset_t>& indptr() const noexcept { return indptr_; }
  const std::vector<col_t>& indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

  RowView row(std::size_t r) const noexcept { return view().row(r); }
  CsrView view() const noexcept { return {n_rows_, n_cols_, indptr_, indices_, values_}; }
  operator CsrView() const noexcept { return view(); }  // NOLINT(google-explicit-constructor)

  /// Deep copy of rows [begin, end).
  CsrMatrix slice_rows(std::size_t begin, std::size_t end) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<offset_t> indptr_;
  std::vector<col_t> indices_;
  std::vector<double> values_;
};

/// Coordinate-format copy of a matrix, entries sorted by (row, col).
struct CooMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<row_t> rows;
  std::vector<col_t> cols;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return rows.size(); }
  friend bool operator==(const CooMatrix&, const CooMatrix&) = default;
};

/// Sorts each row by column, sums duplicate columns and drops stored zeros.
/// Throws IndexOutOfBounds, NegativeOffset, NonMonotonicIndptr (naming the
/// row) or InconsistentLengths.
CsrMatrix validate_and_canonicalize(const RawCsr& raw);

/// Checks the canonical invariants without modifying anything.
bool is_canonical(const RawCsr& raw);

CooMatrix csr_to_coo(const CsrMatrix& m);

/// Inverse of csr_to_coo. Unsorted or duplicated triples are accepted and
/// canonicalized the same way validate_and_canonicalize does.
CsrMatrix coo_to_csr(const CooMatrix& m);

/// Row id of every stored entry of the view, i.e. the COO row array. Entry
/// t corresponds to offset view.base() + t.
std::vector<row_t> expand_row_ids(const CsrView& view);

RawCsr to_raw(const CsrMatrix& m);

}  // namespace sparsedist
