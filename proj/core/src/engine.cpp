#include "sparsedist/engine.hpp"

namespace sparsedist::detail {

std::vector<StreamBlock> partition_stream(const CsrView& m, std::size_t workers) {
  std::vector<StreamBlock> blocks;
  if (m.n_rows() == 0) return blocks;
  // A few blocks per worker lets the shared counter even out skewed rows;
  // the floor keeps per-item overhead small.
  const std::size_t per_worker = 4;
  const std::size_t target = std::max<std::size_t>(4096, m.nnz() / (per_worker * std::max<std::size_t>(1, workers)) + 1);
  std::size_t begin = 0;
  std::size_t acc = 0;
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    acc += m.degree(r);
    if (acc >= target) {
      blocks.push_back({begin, r + 1});
      begin = r + 1;
      acc = 0;
    }
  }
  if (begin < m.n_rows()) blocks.push_back({begin, m.n_rows()});
  return blocks;
}

}  // namespace sparsedist::detail
