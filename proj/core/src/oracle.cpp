#include "sparsedist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsedist/error.hpp"

namespace sparsedist::oracle {

namespace {

void require_nonnegative(std::span<const double> v, std::string_view metric) {
  for (double x : v) {
    if (x < 0.0) throw Error(Errc::DomainError, std::string(metric) + " requires non-negative input");
  }
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double sum_xy(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(std::span<const double> a) { return sum_xy(a, a); }

}  // namespace

DenseMatrix densify(const CsrMatrix& m, std::size_t element_cap) {
  if (m.n_cols() != 0 && m.n_rows() > element_cap / m.n_cols()) {
    throw Error(Errc::SizeOverflow, std::to_string(m.n_rows()) + "x" + std::to_string(m.n_cols()) +
                                        " exceeds the dense element cap " + std::to_string(element_cap));
  }
  DenseMatrix d(m.n_rows(), m.n_cols());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::size_t t = m.indptr()[r]; t < m.indptr()[r + 1]; ++t) d.at(r, m.indices()[t]) = m.values()[t];
  }
  return d;
}

CsrMatrix sparsify(const DenseMatrix& d) {
  std::vector<offset_t> indptr(d.rows + 1, 0);
  std::vector<col_t> indices;
  std::vector<double> values;
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) {
      if (d.at(r, c) != 0.0) {
        indices.push_back(static_cast<col_t>(c));
        values.push_back(d.at(r, c));
      }
    }
    indptr[r + 1] = indices.size();
  }
  return CsrMatrix(d.rows, d.cols, std::move(indptr), std::move(indices), std::move(values));
}

double oracle_distance(std::span<const double> a, std::span<const double> b, std::string_view metric,
                       const OracleParams& params) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "oracle vectors differ in length");
  const std::size_t k = a.size();
  const auto kd = static_cast<double>(k);

  if (metric == "correlation") {
    if (all_zero(a) && all_zero(b)) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      ma += a[i];
      mb += b[i];
    }
    ma /= kd;
    mb /= kd;
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      num += (a[i] - ma) * (b[i] - mb);
      va += (a[i] - ma) * (a[i] - ma);
      vb += (b[i] - mb) * (b[i] - mb);
    }
    const double den = std::sqrt(va) * std::sqrt(vb);
    return den == 0.0 ? 1.0 : 1.0 - num / den;
  }
  if (metric == "cosine") {
    if (all_zero(a) && all_zero(b)) return 0.0;
    const double den = std::sqrt(sum_sq(a)) * std::sqrt(sum_sq(b));
    return den == 0.0 ? 1.0 : 1.0 - sum_xy(a, b) / den;
  }
  if (metric == "dice") {
    if (all_zero(a) && all_zero(b)) return 0.0;
    return 1.0 - 2.0 * sum_xy(a, b) / (sum_sq(a) + sum_sq(b));
  }
  if (metric == "dot") return sum_xy(a, b);
  if (metric == "euclidean") {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  if (metric == "hellinger") {
    require_nonnegative(a, metric);
    require_nonnegative(b, metric);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = std::sqrt(a[i]) - std::sqrt(b[i]);
      s += d * d;
    }
    return std::sqrt(s) / std::sqrt(2.0);
  }
  if (metric == "jaccard") {
    if (all_zero(a) && all_zero(b)) return 0.0;
    const double xy = sum_xy(a, b);
    const double den = sum_sq(a) + sum_sq(b) - xy;
    return den == 0.0 ? 1.0 : 1.0 - xy / den;
  }
  if (metric == "kl") {
    require_nonnegative(a, metric);
    require_nonnegative(b, metric);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == 0.0) continue;
      if (b[i] == 0.0) {
        if (params.strict) throw Error(Errc::DomainError, "kl: x_i > 0 with y_i = 0");
        return 1e308;
      }
      s += a[i] * std::log(a[i] / b[i]);
    }
    return s;
  }
  if (metric == "russelrao") return k == 0 ? 0.0 : (kd - sum_xy(a, b)) / kd;
  if (metric == "canberra") {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double den = std::abs(a[i]) + std::abs(b[i]);
      if (den != 0.0) s += std::abs(a[i] - b[i]) / den;
    }
    return s;
  }
  if (metric == "chebyshev") {
    double m = 0.0;
    for (std::size_t i = 0; i < k; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
  if (metric == "hamming") {
    if (k == 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += a[i] != b[i] ? 1.0 : 0.0;
    return s / kd;
  }
  if (metric == "jensenshannon") {
    require_nonnegative(a, metric);
    require_nonnegative(b, metric);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double mu = (a[i] + b[i]) / 2.0;
      if (a[i] > 0.0) s += a[i] * std::log(a[i] / mu);
      if (b[i] > 0.0) s += b[i] * std::log(b[i] / mu);
    }
    return std::sqrt(std::max(0.0, s / 2.0));
  }
  if (metric == "manhattan") {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::abs(a[i] - b[i]);
    return s;
  }
  if (metric == "minkowski") {
    if (!params.p) throw Error(Errc::MissingParam, "minkowski requires p");
    if (*params.p < 1.0) throw Error(Errc::InvalidParam, "minkowski p must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::pow(std::abs(a[i] - b[i]), *params.p);
    return std::pow(s, 1.0 / *params.p);
  }
  throw Error(Errc::UnknownMetric, "'" + std::string(metric) + "'");
}

DenseMatrix oracle_pairwise(const DenseMatrix& a, const DenseMatrix& b, std::string_view metric,
                            const OracleParams& params) {
  if (a.cols != b.cols) throw Error(Errc::DimensionMismatch, "oracle inputs differ in column count");
  DenseMatrix out(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) out.at(i, j) = oracle_distance(a.row(i), b.row(j), metric, params);
  }
  return out;
}

DenseMatrix min_plus(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols) throw Error(Errc::DimensionMismatch, "min_plus inputs differ in column count");
  DenseMatrix out(a.rows, b.rows, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) {
      for (std::size_t c = 0; c < a.cols; ++c) {
        if (a.at(i, c) != 0.0 && b.at(j, c) != 0.0) out.at(i, j) = std::min(out.at(i, j), a.at(i, c) + b.at(j, c));
      }
    }
  }
  return out;
}

}  // namespace sparsedist::oracle
