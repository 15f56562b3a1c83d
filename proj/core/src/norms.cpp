#include "sparsedist/norms.hpp"

#include <algorithm>
#include <cmath>

namespace sparsedist {

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L0: return "l0";
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::L2Squared: return "l2sq";
    case NormKind::Sum: return "sum";
  }
  return "?";
}

NormVector row_norms(const CsrView& m, NormKind kind) {
  NormVector out{kind, std::vector<double>(m.n_rows(), 0.0)};
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const RowView row = m.row(r);
    double acc = 0.0;
    switch (kind) {
      case NormKind::L0:
        acc = static_cast<double>(row.degree());
        break;
      case NormKind::L1:
        for (double v : row.vals) acc += std::abs(v);
        break;
      case NormKind::Sum:
        for (double v : row.vals) acc += v;
        break;
      case NormKind::L2:
      case NormKind::L2Squared:
        for (double v : row.vals) acc += v * v;
        if (kind == NormKind::L2) acc = std::sqrt(acc);
        break;
    }
    out.values[r] = acc;
  }
  return out;
}

DegreeStats degree_stats(const CsrView& m) {
  DegreeStats s;
  if (m.n_rows() == 0) return s;
  s.min = m.degree(0);
  std::size_t total = 0;
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const std::size_t d = m.degree(r);
    s.min = std::min(s.min, d);
    s.max = std::max(s.max, d);
    total += d;
  }
  s.mean = static_cast<double>(total) / static_cast<double>(m.n_rows());
  s.histogram.assign(s.max + 1, 0);
  for (std::size_t r = 0; r < m.n_rows(); ++r) ++s.histogram[m.degree(r)];
  return s;
}

}  // namespace sparsedist
