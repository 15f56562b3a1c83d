#include "sparsedist/knn.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "sparsedist/engine.hpp"
#include "sparsedist/error.hpp"

namespace sparsedist {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k > n) throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " candidates");
}

void topk_into(std::span<const double> row, std::size_t k, std::vector<std::size_t>& order, double* out_d,
               std::size_t* out_i) {
  order.resize(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t x, std::size_t y) { return row[x] < row[y] || (row[x] == row[y] && x < y); };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
  for (std::size_t t = 0; t < k; ++t) {
    out_d[t] = row[order[t]];
    out_i[t] = order[t];
  }
}

}  // namespace

TopK select_topk(std::span<const double> row_distances, std::size_t k) {
  check_k(k, row_distances.size());
  TopK out{std::vector<double>(k), std::vector<std::size_t>(k)};
  std::vector<std::size_t> order;
  topk_into(row_distances, k, order, out.distances.data(), out.indices.data());
  return out;
}

BatchPlan plan_batches(std::size_t n_queries, std::size_t n_index, std::size_t batch_rows, std::size_t budget_bytes) {
  BatchPlan plan;
  if (batch_rows == 0) {
    const std::size_t per_row = std::max<std::size_t>(1, n_index) * sizeof(double);
    batch_rows = std::max<std::size_t>(1, budget_bytes / per_row);
  }
  plan.batch_rows = std::max<std::size_t>(1, std::min(batch_rows, std::max<std::size_t>(1, n_queries)));
  plan.n_batches = (n_queries + plan.batch_rows - 1) / plan.batch_rows;
  plan.elements_per_batch = plan.batch_rows * n_index;
  return plan;
}

KnnRun kneighbors_run(const CsrView& index, const CsrView& queries, std::size_t k, const MetricSpec& spec,
                      const ExecutionStrategy& strat, std::size_t batch_rows) {
  check_same_cols(queries, index);
  check_k(k, index.n_rows());
  KnnRun run;
  run.plan = plan_batches(queries.n_rows(), index.n_rows(), batch_rows);
  run.strategy = resolve(strat, queries, index);
  NeighborResult& res = run.result;
  res.n_queries = queries.n_rows();
  res.k = k;
  res.distances.resize(res.n_queries * k);
  res.indices.resize(res.n_queries * k);

  std::vector<std::size_t> order;
  for (std::size_t b = 0; b < run.plan.n_batches; ++b) {
    const std::size_t begin = b * run.plan.batch_rows;
    const std::size_t end = std::min(queries.n_rows(), begin + run.plan.batch_rows);
    DistanceRun dr = pairwise_distances_run(queries.slice(begin, end), index, spec, run.strategy);
    run.timings.distance.norms += dr.timings.norms;
    run.timings.distance.pass1 += dr.timings.pass1;
    run.timings.distance.pass2 += dr.timings.pass2;
    run.timings.distance.expansion += dr.timings.expansion;
    run.workspace.merge(dr.pass1);
    if (dr.pass2) run.workspace.merge(*dr.pass2);

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t q = begin; q < end; ++q) {
      topk_into(dr.out.row(q - begin), k, order, res.distances.data() + q * k, res.indices.data() + q * k);
    }
    run.timings.topk += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return run;
}

NeighborResult kneighbors(const CsrView& index, const CsrView& queries, std::size_t k, const MetricSpec& spec,
                          const ExecutionStrategy& strat, std::size_t batch_rows) {
  return kneighbors_run(index, queries, k, spec, strat, batch_rows).result;
}

}  // namespace sparsedist
