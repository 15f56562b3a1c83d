#include "sparsedist/csr.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "sparsedist/error.hpp"

namespace sparsedist {

namespace {

void check_shape(std::size_t n_rows, std::size_t n_cols) {
  if (n_cols >= std::numeric_limits<col_t>::max()) {
    throw Error(Errc::SizeOverflow, "n_cols " + std::to_string(n_cols) + " exceeds 32-bit column ids");
  }
  if (n_rows >= std::numeric_limits<row_t>::max()) {
    throw Error(Errc::SizeOverflow, "n_rows " + std::to_string(n_rows) + " exceeds 32-bit row ids");
  }
}

std::string row_msg(std::size_t r) { return "row " + std::to_string(r); }

}  // namespace

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<offset_t> indptr,
                     std::vector<col_t> indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      indptr_(std::move(indptr)),
      indices_(std::move(indices)),
      values_(std::move(values)) {
  check_shape(n_rows_, n_cols_);
  if (indptr_.size() != n_rows_ + 1 || indices_.size() != values_.size()) {
    throw Error(Errc::InconsistentLengths, "indptr/indices/values lengths disagree with shape");
  }
  if (indptr_[0] != 0 || indptr_[n_rows_] != indices_.size()) {
    throw Error(Errc::NonMonotonicIndptr, "indptr must start at 0 and end at nnz");
  }
  for (std::size_t r = 0; r < n_rows_; ++r) {
    if (indptr_[r + 1] < indptr_[r]) throw Error(Errc::NonMonotonicIndptr, row_msg(r));
    for (offset_t t = indptr_[r]; t < indptr_[r + 1]; ++t) {
      if (indices_[t] >= n_cols_) throw Error(Errc::IndexOutOfBounds, row_msg(r));
      if (t > indptr_[r] && indices_[t] <= indices_[t - 1]) {
        throw Error(Errc::InvalidParam, row_msg(r) + " is not sorted/unique; canonicalize first");
      }
      if (values_[t] == 0.0) {
        throw Error(Errc::InvalidParam, row_msg(r) + " stores an explicit zero; canonicalize first");
      }
    }
  }
}

CsrMatrix CsrMatrix::zeros(std::size_t n_rows, std::size_t n_cols) {
  return CsrMatrix(n_rows, n_cols, std::vector<offset_t>(n_rows + 1, 0), {}, {});
}

CsrMatrix CsrMatrix::slice_rows(std::size_t begin, std::size_t end) const {
  const offset_t b = indptr_[begin];
  const offset_t e = indptr_[end];
  std::vector<offset_t> ptr(end - begin + 1);
  for (std::size_t r = begin; r <= end; ++r) ptr[r - begin] = indptr_[r] - b;
  return CsrMatrix(end - begin, n_cols_, std::move(ptr),
                   std::vector<col_t>(indices_.begin() + b, indices_.begin() + e),
                   std::vector<double>(values_.begin() + b, values_.begin() + e));
}

CsrMatrix validate_and_canonicalize(const RawCsr& raw) {
  check_shape(raw.n_rows, raw.n_cols);
  if (raw.indptr.size() != raw.n_rows + 1) {
    throw Error(Errc::InconsistentLengths, "indptr has length " + std::to_string(raw.indptr.size()) +
                                               ", expected n_rows+1 = " + std::to_string(raw.n_rows + 1));
  }
  if (raw.indices.size() != raw.values.size()) {
    throw Error(Errc::InconsistentLengths, "indices and values lengths differ");
  }
  for (std::size_t r = 0; r <= raw.n_rows; ++r) {
    if (raw.indptr[r] < 0) throw Error(Errc::NegativeOffset, row_msg(r));
  }
  if (raw.indptr[0] != 0) throw Error(Errc::NonMonotonicIndptr, "indptr[0] must be 0");
  for (std::size_t r = 0; r < raw.n_rows; ++r) {
    if (raw.indptr[r + 1] < raw.indptr[r]) throw Error(Errc::NonMonotonicIndptr, row_msg(r));
  }
  if (static_cast<std::size_t>(raw.indptr[raw.n_rows]) != raw.indices.size()) {
    throw Error(Errc::InconsistentLengths, "indptr[n_rows] does not equal nnz");
  }

  std::vector<offset_t> indptr(raw.n_rows + 1, 0);
  std::vector<col_t> indices;
  std::vector<double> values;
  indices.reserve(raw.indices.size());
  values.reserve(raw.values.size());

  std::vector<std::pair<col_t, double>> scratch;
  for (std::size_t r = 0; r < raw.n_rows; ++r) {
    const auto b = static_cast<std::size_t>(raw.indptr[r]);
    const auto e = static_cast<std::size_t>(raw.indptr[r + 1]);
    scratch.clear();
    for (std::size_t t = b; t < e; ++t) {
      const std::int64_t c = raw.indices[t];
      if (c < 0 || static_cast<std::size_t>(c) >= raw.n_cols) {
        throw Error(Errc::IndexOutOfBounds,
                    row_msg(r) + " has column " + std::to_string(c) + " with n_cols=" + std::to_string(raw.n_cols));
      }
      scratch.emplace_back(static_cast<col_t>(c), raw.values[t]);
    }
    std::stable_sort(scratch.begin(), scratch.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t t = 0; t < scratch.size();) {
      const col_t c = scratch[t].first;
      double sum = 0.0;
      for (; t < scratch.size() && scratch[t].first == c; ++t) sum += scratch[t].second;
      if (sum != 0.0) {
        indices.push_back(c);
        values.push_back(sum);
      }
    }
    indptr[r + 1] = indices.size();
  }
  return CsrMatrix(raw.n_rows, raw.n_cols, std::move(indptr), std::move(indices), std::move(values));
}

bool is_canonical(const RawCsr& raw) {
  if (raw.indptr.size() != raw.n_rows + 1 || raw.indices.size() != raw.values.size()) return false;
  if (raw.indptr[0] != 0 || static_cast<std::size_t>(raw.indptr[raw.n_rows]) != raw.indices.size()) return false;
  for (std::size_t r = 0; r < raw.n_rows; ++r) {
    if (raw.indptr[r + 1] < raw.indptr[r]) return false;
    for (auto t = raw.indptr[r]; t < raw.indptr[r + 1]; ++t) {
      const auto c = raw.indices[t];
      if (c < 0 || static_cast<std::size_t>(c) >= raw.n_cols || raw.values[t] == 0.0) return false;
      if (t > raw.indptr[r] && c <= raw.indices[t - 1]) return false;
    }
  }
  return true;
}

CooMatrix csr_to_coo(const CsrMatrix& m) {
  CooMatrix out;
  out.n_rows = m.n_rows();
  out.n_cols = m.n_cols();
  out.rows = expand_row_ids(m.view());
  out.cols = m.indices();
  out.values = m.values();
  return out;
}

CsrMatrix coo_to_csr(const CooMatrix& m) {
  if (m.rows.size() != m.cols.size() || m.rows.size() != m.values.size()) {
    throw Error(Errc::InconsistentLengths, "COO arrays differ in length");
  }
  std::vector<std::size_t> order(m.nnz());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m.rows[a] < m.rows[b]; });

  RawCsr raw;
  raw.n_rows = m.n_rows;
  raw.n_cols = m.n_cols;
  raw.indptr.assign(m.n_rows + 1, 0);
  raw.indices.reserve(m.nnz());
  raw.values.reserve(m.nnz());
  for (std::size_t t : order) {
    if (m.rows[t] >= m.n_rows) {
      throw Error(Errc::IndexOutOfBounds, "COO entry " + std::to_string(t) + " has row " + std::to_string(m.rows[t]));
    }
    ++raw.indptr[m.rows[t] + 1];
    raw.indices.push_back(m.cols[t]);
    raw.values.push_back(m.values[t]);
  }
  for (std::size_t r = 0; r < m.n_rows; ++r) raw.indptr[r + 1] += raw.indptr[r];
  return validate_and_canonicalize(raw);
}

std::vector<row_t> expand_row_ids(const CsrView& view) {
  std::vector<row_t> rows(view.nnz());
  const offset_t base = view.base();
  for (std::size_t r = 0; r < view.n_rows(); ++r) {
    std::fill(rows.begin() + (view.row_begin(r) - base), rows.begin() + (view.row_end(r) - base),
              static_cast<row_t>(r));
  }
  return rows;
}

RawCsr to_raw(const CsrMatrix& m) {
  RawCsr raw;
  raw.n_rows = m.n_rows();
  raw.n_cols = m.n_cols();
  raw.indptr.assign(m.indptr().begin(), m.indptr().end());
  raw.indices.assign(m.indices().begin(), m.indices().end());
  raw.values = m.values();
  return raw;
}

}  // namespace sparsedist
