// sparsedist: pairwise distances and brute-force kNN over sparse matrices.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sparsedist/error.hpp"
#include "sparsedist/io/bench.hpp"
#include "sparsedist/io/generate.hpp"
#include "sparsedist/io/matrix_market.hpp"
#include "sparsedist/io/output.hpp"
#include "sparsedist/knn.hpp"
#include "sparsedist/metrics.hpp"

namespace sd = sparsedist;
namespace sio = sparsedist::io;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kVerifyFailed = 3 };

struct StrategyOpts {
  std::string name = "auto";
  std::size_t capacity = 0;
  double load = 0.5;
  std::optional<std::size_t> workers;

  void add_to(CLI::App* app) {
    app->add_option("--strategy", name, "auto | naive | dense | hash")->capture_default_str();
    app->add_option("--capacity", capacity, "hash accumulator slots per worker (0 = from data)");
    app->add_option("--load-factor", load, "hash accumulator load budget")->capture_default_str();
    app->add_option("--workers", workers, "worker threads (overrides $WORKERS)");
  }

  sd::ExecutionStrategy build() const {
    sd::ExecutionStrategy s;
    s.kind = sd::parse_strategy(name);
    s.accumulator_capacity = capacity;
    s.max_load_factor = load;
    if (workers) {
      s.workers = *workers;
    } else if (const char* env = std::getenv("WORKERS"); env && *env) {
      try {
        s.workers = std::stoul(env);
      } catch (const std::exception&) {
        throw sd::Error(sd::Errc::InvalidParam, std::string("WORKERS='") + env + "' is not a count");
      }
    }
    sd::validate(s);
    return s;
  }
};

struct MetricOpts {
  std::string name = "euclidean";
  std::optional<double> p;
  bool permissive = false;

  void add_to(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("--metric", name, "distance measure");
    if (required) opt->required();
    app->add_option("--p", p, "Minkowski exponent (p >= 1)");
    app->add_flag("--permissive", permissive, "KL: saturate instead of failing on uncovered columns");
  }

  sd::MetricParams params() const { return {p, !permissive}; }
};

struct OutputOpts {
  std::optional<std::string> path;
  std::string format;
  bool header = false;

  void add_to(CLI::App* app) {
    app->add_option("--out", path, "output file (stdout when omitted)");
    app->add_option("--format", format, "csv | json (default: from --out extension)");
    app->add_flag("--header", header, "CSV header line");
  }

  sio::OutputFormat resolved() const {
    if (!format.empty()) return sio::parse_format(format);
    return path ? sio::format_for(*path) : sio::OutputFormat::Csv;
  }

  template <class Result>
  void write(const Result& r) const {
    if (path) {
      sio::write_output(r, *path, resolved(), header);
    } else if constexpr (std::is_same_v<Result, sd::DistanceOutput>) {
      sio::write_distances(r, std::cout, resolved(), header);
    } else {
      sio::write_neighbors(r, std::cout, resolved(), header);
    }
  }
};

int exit_code_for(sd::Errc code) {
  switch (code) {
    case sd::Errc::UnknownMetric:
    case sd::Errc::MissingParam:
    case sd::Errc::InvalidParam:
    case sd::Errc::InvalidSpec:
      return kUsage;
    default:
      return kDomain;
  }
}

std::vector<sd::StrategyKind> parse_strategy_list(const std::vector<std::string>& names) {
  std::vector<sd::StrategyKind> out;
  for (const auto& n : names) out.push_back(sd::parse_strategy(n));
  return out;
}

void print_bench_table(const sio::BenchReport& rep) {
  std::printf("%s: %zu queries x %zu rows, %zu cols, nnz %zu, k %zu (load %.3fs)\n", rep.metric.c_str(),
              rep.query_rows, rep.index_rows, rep.n_cols, rep.nnz, rep.k, rep.load_seconds);
  std::printf("%-8s %10s %10s %10s %10s %10s  %-16s\n", "strategy", "query_s", "norms", "pass1", "pass2", "topk",
              "checksum");
  for (const auto& r : rep.runs) {
    std::printf("%-8s %10.4f %10.4f %10.4f %10.4f %10.4f  %016llx\n",
                std::string(sd::to_string(r.strategy.kind)).c_str(), r.query_seconds, r.timings.distance.norms,
                r.timings.distance.pass1, r.timings.distance.pass2, r.timings.topk,
                static_cast<unsigned long long>(r.checksum));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise distances and k-nearest neighbors over sparse matrices"};
  app.require_subcommand(1);

  // dist
  auto* dist = app.add_subcommand("dist", "pairwise distance matrix between rows of A and rows of B");
  MetricOpts dist_metric;
  StrategyOpts dist_strat;
  OutputOpts dist_out;
  std::string dist_a;
  std::optional<std::string> dist_b;
  dist_metric.add_to(dist);
  dist_strat.add_to(dist);
  dist_out.add_to(dist);
  dist->add_option("--input", dist_a, "A (Matrix Market)")->required()->check(CLI::ExistingFile);
  dist->add_option("--input-b", dist_b, "B (defaults to A)")->check(CLI::ExistingFile);

  // knn
  auto* knn = app.add_subcommand("knn", "k nearest index rows for each query row");
  MetricOpts knn_metric;
  StrategyOpts knn_strat;
  OutputOpts knn_out;
  std::string knn_index;
  std::optional<std::string> knn_queries;
  std::size_t knn_k = 10;
  std::size_t knn_batch = 0;
  knn_metric.add_to(knn);
  knn_strat.add_to(knn);
  knn_out.add_to(knn);
  knn->add_option("--input", knn_index, "index matrix")->required()->check(CLI::ExistingFile);
  knn->add_option("--queries,--input-b", knn_queries, "query matrix (defaults to the index)")
      ->check(CLI::ExistingFile);
  knn->add_option("--k", knn_k, "neighbors per query")->capture_default_str();
  knn->add_option("--batch-rows", knn_batch, "query rows per batch (0 = fit 256 MiB)");

  // bench
  auto* bench = app.add_subcommand("bench", "time kNN queries per strategy");
  sio::RunConfig bench_cfg;
  MetricOpts bench_metric;
  StrategyOpts bench_strat;
  std::optional<std::string> bench_input;
  std::optional<std::string> bench_out;
  std::vector<std::string> bench_strategies{"naive", "dense", "hash"};
  std::size_t gen_rows = 5000, gen_cols = 5000;
  std::string gen_degrees = "uniform:20", gen_values = "uniform01";
  std::uint64_t gen_seed = 1;
  bool bench_json = false;
  bench_metric.name = "manhattan";
  bench_metric.add_to(bench, false);
  bench_strat.add_to(bench);
  bench->add_option("--input", bench_input, "dataset (Matrix Market); generated when omitted")
      ->check(CLI::ExistingFile);
  bench->add_option("--rows", gen_rows, "generated rows")->capture_default_str();
  bench->add_option("--cols", gen_cols, "generated columns")->capture_default_str();
  bench->add_option("--degree-dist", gen_degrees, "uniform:D | zipf:S:MAX | density:F")->capture_default_str();
  bench->add_option("--values", gen_values, "uniform01 | tfidf")->capture_default_str();
  bench->add_option("--seed", gen_seed)->capture_default_str();
  bench->add_option("--queries", bench_cfg.query_rows, "query the first N rows (0 = all)");
  bench->add_option("--k", bench_cfg.k)->capture_default_str();
  bench->add_option("--batch-rows", bench_cfg.batch_rows);
  bench->add_option("--repeat", bench_cfg.repeat, "runs per strategy; the fastest is kept")->capture_default_str();
  bench->add_option("--strategies", bench_strategies, "strategies to time")->delimiter(',');
  bench->add_flag("--json", bench_json, "print the report as JSON");
  bench->add_option("--out", bench_out, "also write the JSON report here");

  // gen
  auto* gen = app.add_subcommand("gen", "write a synthetic sparse matrix");
  std::size_t g_rows = 0, g_cols = 0;
  std::string g_degrees = "uniform:10", g_values = "uniform01", g_out;
  std::uint64_t g_seed = 0;
  gen->add_option("--rows", g_rows)->required();
  gen->add_option("--cols", g_cols)->required();
  gen->add_option("--degree-dist", g_degrees, "uniform:D | zipf:S:MAX | density:F")->capture_default_str();
  gen->add_option("--values", g_values, "uniform01 | tfidf")->capture_default_str();
  gen->add_option("--seed", g_seed)->capture_default_str();
  gen->add_option("--out", g_out, "Matrix Market file")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "compare the engine with the dense reference on random inputs");
  MetricOpts v_metric;
  StrategyOpts v_strat;
  std::size_t v_trials = 20, v_rows = 40, v_cols = 32;
  std::uint64_t v_seed = 1;
  v_metric.add_to(verify);
  v_strat.add_to(verify);
  verify->add_option("--trials", v_trials)->capture_default_str();
  verify->add_option("--max-rows", v_rows)->capture_default_str();
  verify->add_option("--max-cols", v_cols)->capture_default_str();
  verify->add_option("--seed", v_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (dist->parsed()) {
      const sd::MetricSpec spec = sd::metric_registry(dist_metric.name, dist_metric.params());
      const sd::ExecutionStrategy st = dist_strat.build();
      const sd::CsrMatrix a = sio::read_matrix_market(dist_a);
      const sd::CsrMatrix b = dist_b ? sio::read_matrix_market(*dist_b) : sd::CsrMatrix{};
      const sd::CsrView bv = dist_b ? b.view() : a.view();
      dist_out.write(sd::pairwise_distances(a, bv, spec, st));
    } else if (knn->parsed()) {
      const sd::MetricSpec spec = sd::metric_registry(knn_metric.name, knn_metric.params());
      const sd::ExecutionStrategy st = knn_strat.build();
      const sd::CsrMatrix index = sio::read_matrix_market(knn_index);
      const sd::CsrMatrix q = knn_queries ? sio::read_matrix_market(*knn_queries) : sd::CsrMatrix{};
      const sd::CsrView qv = knn_queries ? q.view() : index.view();
      knn_out.write(sd::kneighbors(index, qv, knn_k, spec, st, knn_batch));
    } else if (bench->parsed()) {
      bench_cfg.command = "bench";
      bench_cfg.metric = bench_metric.name;
      bench_cfg.metric_params = bench_metric.params();
      bench_cfg.strategy = bench_strat.build();
      bench_cfg.bench_strategies = parse_strategy_list(bench_strategies);
      if (bench_input) {
        bench_cfg.input = *bench_input;
      } else {
        bench_cfg.gen = sio::GenSpec{gen_rows, gen_cols, sio::DegreeDist::parse(gen_degrees, gen_cols),
                                     sio::parse_value_dist(gen_values), gen_seed};
      }
      const sio::BenchReport rep = sio::run_bench(bench_cfg);
      const std::string doc = rep.to_json();
      if (bench_json) {
        std::cout << doc << '\n';
      } else {
        print_bench_table(rep);
      }
      if (bench_out) {
        std::ofstream f(*bench_out);
        if (!(f << doc << '\n')) throw sd::Error(sd::Errc::IoError, "cannot write " + *bench_out);
      }
    } else if (gen->parsed()) {
      const sio::GenSpec spec{g_rows, g_cols, sio::DegreeDist::parse(g_degrees, g_cols),
                              sio::parse_value_dist(g_values), g_seed};
      sio::write_matrix_market(sio::generate(spec), g_out);
    } else if (verify->parsed()) {
      const sio::VerifyReport rep =
          sio::run_verify(v_metric.name, v_metric.params(), v_strat.build(), v_trials, v_rows, v_cols, v_seed);
      std::printf("%s %s: %zu trials, %zu cells, max abs err %.3g, failures %zu\n", rep.passed() ? "PASS" : "FAIL",
                  rep.metric.c_str(), rep.trials, rep.cells, rep.max_abs_error, rep.failures);
      return rep.passed() ? kOk : kVerifyFailed;
    }
  } catch (const sd::Error& e) {
    std::fprintf(stderr, "sparsedist: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sparsedist: %s\n", e.what());
    return kDomain;
  }
  return kOk;
}
