#include "sparsedist/io/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

#include "sparsedist/error.hpp"
#include "sparsedist/io/matrix_market.hpp"
#include "sparsedist/oracle.hpp"

namespace sparsedist::io {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

std::uint64_t quantize(double v, double quantum) {
  if (std::isnan(v)) return 0x7ff8000000000000ULL;
  const double q = std::round(v / quantum);
  constexpr double lim = 9.0e18;
  if (q >= lim) return 0x7fffffffffffffffULL;
  if (q <= -lim) return 0x8000000000000001ULL;
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(q));
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool binary_metric(const std::string& m) {
  return m == "dice" || m == "jaccard" || m == "russelrao" || m == "hamming";
}

// Random rows of the given density; `cover` forces every column of the
// covering pattern to be stored (KL needs B to cover A).
CsrMatrix random_rows(std::size_t rows, std::size_t cols, double density, bool binary, std::mt19937_64& rng,
                      const std::vector<bool>* cover = nullptr) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> val(0.05, 1.0);
  RawCsr raw;
  raw.n_rows = rows;
  raw.n_cols = cols;
  raw.indptr.push_back(0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (keep(rng) || (cover && (*cover)[c])) {
        raw.indices.push_back(static_cast<std::int64_t>(c));
        raw.values.push_back(binary ? 1.0 : val(rng));
      }
    }
    raw.indptr.push_back(static_cast<std::int64_t>(raw.indices.size()));
  }
  return validate_and_canonicalize(raw);
}

}  // namespace

std::uint64_t quantized_checksum(std::span<const double> values, double quantum) {
  std::uint64_t h = kFnvOffset;
  for (double v : values) fnv_mix(h, quantize(v, quantum));
  return h;
}

std::uint64_t quantized_checksum(const NeighborResult& r, double quantum) {
  std::uint64_t h = quantized_checksum(r.distances, quantum);
  for (std::size_t i : r.indices) fnv_mix(h, i);
  return h;
}

std::string BenchReport::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const BenchRun& r : runs) {
    runs_json.push_back({
        {"strategy", std::string(to_string(r.strategy.kind))},
        {"accumulator_capacity", r.strategy.accumulator_capacity},
        {"max_load_factor", r.strategy.max_load_factor},
        {"workers", r.strategy.workers},
        {"query_seconds", r.query_seconds},
        {"phases",
         {{"norms", r.timings.distance.norms},
          {"pass1", r.timings.distance.pass1},
          {"pass2", r.timings.distance.pass2},
          {"expansion", r.timings.distance.expansion},
          {"topk", r.timings.topk}}},
        {"workspace",
         {{"peak_accumulator_entries", r.workspace.peak_accumulator_entries},
          {"workspace_elements", r.workspace.workspace_elements},
          {"chunks_executed", r.workspace.chunks_executed},
          {"accumulator_slots", r.workspace.accumulator_slots},
          {"peak_load_factor", r.workspace.peak_load_factor()}}},
        {"checksum", hex64(r.checksum)},
    });
  }
  const nlohmann::json doc = {
      {"metric", metric},
      {"index_rows", index_rows},
      {"query_rows", query_rows},
      {"n_cols", n_cols},
      {"nnz", nnz},
      {"k", k},
      {"repeat", repeat},
      {"batch_rows", plan.batch_rows},
      {"batches", plan.n_batches},
      {"load_seconds", load_seconds},
      {"runs", std::move(runs_json)},
  };
  return doc.dump(2);
}

BenchReport run_bench(const RunConfig& config) {
  const MetricSpec spec = metric_registry(config.metric, config.metric_params);

  const auto t0 = std::chrono::steady_clock::now();
  CsrMatrix data;
  if (config.input) {
    data = read_matrix_market(*config.input);
  } else if (config.gen) {
    data = generate(*config.gen);
  } else {
    throw Error(Errc::InvalidParam, "bench needs --input or a generator spec");
  }
  BenchReport rep;
  rep.load_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::size_t q = config.query_rows == 0 ? data.n_rows() : std::min(config.query_rows, data.n_rows());
  const CsrView queries = data.view().slice(0, q);
  rep.metric = spec.name;
  rep.index_rows = data.n_rows();
  rep.query_rows = q;
  rep.n_cols = data.n_cols();
  rep.nnz = data.nnz();
  rep.k = config.k;
  rep.repeat = std::max<std::size_t>(1, config.repeat);

  for (StrategyKind kind : config.bench_strategies) {
    ExecutionStrategy st = config.strategy;
    st.kind = kind;
    if (kind != StrategyKind::BalancedHash) st.accumulator_capacity = 0;
    BenchRun best;
    best.query_seconds = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rep.repeat; ++r) {
      const auto q0 = std::chrono::steady_clock::now();
      KnnRun run = kneighbors_run(data, queries, config.k, spec, st, config.batch_rows);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - q0).count();
      if (secs < best.query_seconds) {
        best.query_seconds = secs;
        best.strategy = run.strategy;
        best.timings = run.timings;
        best.workspace = run.workspace;
        best.checksum = quantized_checksum(run.result);
        rep.plan = run.plan;
      }
    }
    rep.runs.push_back(best);
  }
  return rep;
}

VerifyReport run_verify(const std::string& metric, const MetricParams& params, const ExecutionStrategy& strat,
                        std::size_t trials, std::size_t max_rows, std::size_t max_cols, std::uint64_t seed) {
  const MetricSpec spec = metric_registry(metric, params);
  VerifyReport rep;
  rep.metric = spec.name;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim_rows(1, std::max<std::size_t>(1, max_rows));
  std::uniform_int_distribution<std::size_t> dim_cols(std::min<std::size_t>(2, max_cols), std::max<std::size_t>(2, max_cols));
  std::uniform_real_distribution<double> dens(0.05, 0.5);
  const bool binary = binary_metric(spec.name);

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = dim_rows(rng), n = dim_rows(rng), k = dim_cols(rng);
    const CsrMatrix a = random_rows(m, k, dens(rng), binary, rng);
    std::vector<bool> cover(k, false);
    if (spec.id == MetricId::KLDivergence) {
      for (col_t c : a.indices()) cover[c] = true;
    }
    const CsrMatrix b = random_rows(n, k, dens(rng), binary, rng, &cover);

    const DistanceOutput got = pairwise_distances(a, b, spec, strat);
    const oracle::DenseMatrix want = oracle::oracle_pairwise(oracle::densify(a), oracle::densify(b), spec.name,
                                                             {params.p, params.strict});
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double e = std::abs(got(i, j) - want.at(i, j));
        const double rel = e / std::max(std::abs(want.at(i, j)), std::numeric_limits<double>::min());
        rep.max_abs_error = std::max(rep.max_abs_error, e);
        if (e > 1e-9) rep.max_rel_error = std::max(rep.max_rel_error, rel);
        if (!(e <= std::max(1e-9, 1e-6 * std::abs(want.at(i, j))))) ++rep.failures;
        ++rep.cells;
      }
    }
  }
  return rep;
}

}  // namespace sparsedist::io
