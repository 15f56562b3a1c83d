#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sparsedist/engine.hpp"
#include "sparsedist/error.hpp"
#include "sparsedist/metrics.hpp"
#include "sparsedist/oracle.hpp"
#include "test_util.hpp"

namespace sd = sparsedist;
using sd::ExecutionStrategy;
using sd::testing::from_dense;
using sd::testing::random_csr;
using sd::testing::Values;

namespace {

const sd::Semiring kManhattan = sd::namm_semiring("manhattan", sd::ops::AbsDiff{});
const sd::Semiring kChebyshev = sd::namm_semiring("chebyshev", sd::ops::AbsDiff{}, sd::ops::Max{});

std::vector<ExecutionStrategy> all_strategies() {
  return {ExecutionStrategy::naive(), ExecutionStrategy::dense(), ExecutionStrategy::hash(),
          ExecutionStrategy::hash(4, 0.5), ExecutionStrategy::hash(7, 1.0)};
}

template <class S>
sd::DistanceOutput run(const sd::CsrView& a, const sd::CsrView& b, const S& s, ExecutionStrategy st,
                       std::size_t workers = 1) {
  st.workers = workers;
  return sd::pairwise_generalized(a, b, s, st).out;
}

// Literal evaluation of the reduction over all k columns.
sd::DistanceOutput dense_reduce(const sd::CsrMatrix& a, const sd::CsrMatrix& b, const sd::Semiring& s) {
  const auto da = sd::oracle::densify(a), db = sd::oracle::densify(b);
  sd::DistanceOutput out(a.n_rows(), b.n_rows());
  for (std::size_t i = 0; i < da.rows; ++i) {
    for (std::size_t j = 0; j < db.rows; ++j) {
      double acc = s.reduce_identity();
      for (std::size_t c = 0; c < da.cols; ++c) {
        if (da.at(i, c) == 0.0 && db.at(j, c) == 0.0) continue;
        acc = s.reduce(acc, s.product(da.at(i, c), db.at(j, c)));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

TEST(Pass1, DotProductIntersection) {
  const sd::CsrMatrix a = from_dense({{1, 0, 1}}), b = from_dense({{0, 1, 1}});
  for (const auto& st : all_strategies()) {
    sd::DistanceOutput out(1, 1, 0.0);
    sd::pairwise_spmv_pass1(a, b, sd::kDotProduct, st, out);
    EXPECT_EQ(out(0, 0), 1.0) << sd::to_string(st.kind);
  }
}

TEST(Pass1, ManhattanSeesOnlyColumnsOfB) {
  const sd::CsrMatrix a = from_dense({{1, 0, 1}}), b = from_dense({{0, 1, 0}});
  for (const auto& st : all_strategies()) {
    sd::DistanceOutput out(1, 1, 0.0);
    sd::pairwise_spmv_pass1(a, b, kManhattan, st, out);
    EXPECT_EQ(out(0, 0), 1.0) << sd::to_string(st.kind);
    sd::pairwise_spmv_pass2(a, b, kManhattan, st, out);
    EXPECT_EQ(out(0, 0), 3.0) << sd::to_string(st.kind);
  }
}

TEST(Pass1, EmptyBLeavesOutputUnchanged) {
  std::mt19937_64 rng(1);
  const sd::CsrMatrix a = random_csr(5, 9, 0.4, rng);
  const sd::CsrMatrix b = sd::CsrMatrix::zeros(4, 9);
  for (const auto& st : all_strategies()) {
    sd::DistanceOutput out(5, 4, 7.0);
    sd::pairwise_spmv_pass1(a, b, kManhattan, st, out);
    EXPECT_EQ(out, sd::DistanceOutput(5, 4, 7.0));
  }
}

TEST(Pass2, EmptyALeavesOutputUnchanged) {
  std::mt19937_64 rng(2);
  const sd::CsrMatrix a = sd::CsrMatrix::zeros(3, 9);
  const sd::CsrMatrix b = random_csr(4, 9, 0.4, rng);
  for (const auto& st : all_strategies()) {
    sd::DistanceOutput out(3, 4, 7.0);
    sd::pairwise_spmv_pass2(a, b, kManhattan, st, out);
    EXPECT_EQ(out, sd::DistanceOutput(3, 4, 7.0));
  }
}

TEST(Pass2, SamePatternContributesNothing) {
  std::mt19937_64 rng(3);
  const sd::CsrMatrix a = random_csr(6, 12, 0.5, rng);
  std::vector<double> vals(a.values());
  for (double& v : vals) v *= 2.5;
  const sd::CsrMatrix b(a.n_rows(), a.n_cols(), a.indptr(), a.indices(), vals);
  // Row i of A and row i of B share a pattern; pass 2 must leave (i, i) alone.
  for (const auto& st : all_strategies()) {
    sd::DistanceOutput out(6, 6, -1.0);
    sd::pairwise_spmv_pass2(a, b, kManhattan, st, out);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(out(i, i), -1.0);
  }
}

TEST(Pass2, AnnihilatingSemiringAddsOnlyIdentity) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const sd::CsrMatrix a = random_csr(8, 20, 0.3, rng, Values::Signed);
    const sd::CsrMatrix b = random_csr(7, 20, 0.3, rng, Values::Signed);
    for (const auto& st : all_strategies()) {
      sd::DistanceOutput out(8, 7, 0.0);
      sd::pairwise_spmv_pass1(a, b, sd::kDotProduct, st, out);
      const sd::DistanceOutput after1 = out;
      sd::pairwise_spmv_pass2(a, b, sd::kDotProduct, st, out);
      EXPECT_EQ(out, after1);
    }
  }
}

TEST(Generalized, GramMatrix) {
  const sd::CsrMatrix a = from_dense({{1, 0, 1}, {0, 1, 0}});
  for (const auto& st : all_strategies()) {
    const sd::DistanceOutput out = run(a, a, sd::kDotProduct, st);
    EXPECT_EQ(out(0, 0), 2.0);
    EXPECT_EQ(out(0, 1), 0.0);
    EXPECT_EQ(out(1, 0), 0.0);
    EXPECT_EQ(out(1, 1), 1.0);
  }
}

TEST(Generalized, ManhattanAppendixVectors) {
  const sd::CsrMatrix a = from_dense({{1, 0, 1}}), b = from_dense({{0, 1, 0}});
  for (const auto& st : all_strategies()) {
    const sd::PairwiseResult r = sd::pairwise_generalized(a, b, kManhattan, st);
    EXPECT_EQ(r.out(0, 0), 3.0);
  }
}

TEST(Generalized, TropicalMatchesMinPlus) {
  std::mt19937_64 rng(5);
  const sd::CsrMatrix adj = from_dense({{0, 2}, {3, 0}});
  const auto want2 = sd::oracle::min_plus(sd::oracle::densify(adj), sd::oracle::densify(adj));
  const sd::DistanceOutput got2 = run(adj, adj, sd::kMinPlus, ExecutionStrategy::dense());
  // Row 0 stores column 1 only, row 1 column 0 only: no path between them.
  EXPECT_EQ(got2(0, 0), 4.0);
  EXPECT_EQ(got2(0, 1), std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(got2.data()[t], want2.data[t]);

  for (int t = 0; t < 30; ++t) {
    const sd::CsrMatrix a = random_csr(1 + t % 11, 1 + t % 13, 0.35, rng, Values::Signed);
    const sd::CsrMatrix b = random_csr(1 + t % 7, a.n_cols(), 0.35, rng, Values::Signed);
    const auto want = sd::oracle::min_plus(sd::oracle::densify(a), sd::oracle::densify(b));
    for (const auto& st : all_strategies()) {
      const sd::DistanceOutput got = run(a, b, sd::kMinPlus, st);
      for (std::size_t k = 0; k < want.data.size(); ++k) ASSERT_EQ(got.data()[k], want.data[k]);
    }
  }
}

TEST(Generalized, DimensionMismatch) {
  const sd::CsrMatrix a = sd::CsrMatrix::zeros(2, 3), b = sd::CsrMatrix::zeros(2, 4);
  try {
    sd::pairwise_generalized(a, b, sd::kDotProduct, ExecutionStrategy{});
    FAIL();
  } catch (const sd::Error& e) {
    EXPECT_EQ(e.code(), sd::Errc::DimensionMismatch);
  }
  sd::DistanceOutput wrong(3, 2);
  EXPECT_THROW(sd::pairwise_spmv_pass1(a, a, sd::kDotProduct, ExecutionStrategy{}, wrong), sd::Error);
}

TEST(Generalized, UnionDecompositionMatchesDenseEvaluation) {
  std::mt19937_64 rng(6);
  std::vector<sd::Semiring> namms{kManhattan, kChebyshev};
  for (std::string_view name : sd::metric_names()) {
    sd::MetricParams p;
    p.p = 1.7;
    const sd::MetricSpec spec = sd::metric_registry(name, p);
    if (spec.passes == 2) namms.push_back(spec.semiring);
  }
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + t % 32;
    const sd::CsrMatrix a = random_csr(1 + t % 9, k, 0.05 + 0.01 * t, rng);
    const sd::CsrMatrix b = random_csr(1 + t % 6, k, 0.3, rng);
    for (const sd::Semiring& s : namms) {
      const sd::DistanceOutput want = dense_reduce(a, b, s);
      for (const auto& st : all_strategies()) {
        const sd::DistanceOutput got = run(a, b, s, st);
        EXPECT_LE(sd::testing::max_abs_diff(got, want), 1e-12) << s.name() << " " << sd::to_string(st.kind);
      }
    }
  }
}

TEST(Generalized, StrategiesAgreeBitForBit) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 50), cols(1, 64);
  std::uniform_real_distribution<double> dens(0.01, 0.3);
  std::vector<sd::Semiring> semirings{sd::dot_product_semiring(), sd::tropical_semiring(), kManhattan, kChebyshev};
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = cols(rng);
    const sd::CsrMatrix a = random_csr(dim(rng), k, dens(rng), rng, Values::Signed);
    const sd::CsrMatrix b = random_csr(dim(rng), k, dens(rng), rng, Values::Signed);
    for (const sd::Semiring& s : semirings) {
      const sd::DistanceOutput ref = run(a, b, s, ExecutionStrategy::naive());
      for (const auto& st : all_strategies()) {
        EXPECT_EQ(run(a, b, s, st), ref) << s.name() << " " << sd::to_string(st.kind);
      }
    }
  }
}

TEST(Generalized, DeterministicAcrossWorkerCounts) {
  std::mt19937_64 rng(8);
  const sd::CsrMatrix a = random_csr(60, 300, 0.1, rng, Values::Signed);
  const sd::CsrMatrix b = random_csr(90, 300, 0.1, rng, Values::Signed);
  for (const auto& st : all_strategies()) {
    const sd::DistanceOutput ref = run(a, b, kManhattan, st, 1);
    for (std::size_t w : {2u, 3u, 8u}) {
      EXPECT_EQ(run(a, b, kManhattan, st, w), ref) << sd::to_string(st.kind) << " workers=" << w;
      EXPECT_EQ(run(a, b, kManhattan, st, w), run(a, b, kManhattan, st, w));
    }
  }
}

TEST(Generalized, AliasedSelfDistance) {
  std::mt19937_64 rng(9);
  const sd::CsrMatrix a = random_csr(20, 40, 0.2, rng, Values::Signed);
  const sd::CsrMatrix copy = a;
  for (const auto& st : all_strategies()) {
    const sd::DistanceOutput self = run(a, a, kManhattan, st);
    EXPECT_EQ(self, run(a, copy, kManhattan, st));
    for (std::size_t i = 0; i < a.n_rows(); ++i) EXPECT_EQ(self(i, i), 0.0);
  }
}

TEST(Generalized, SlicedViews) {
  std::mt19937_64 rng(10);
  const sd::CsrMatrix a = random_csr(30, 40, 0.2, rng);
  const sd::DistanceOutput full = run(a, a, kManhattan, ExecutionStrategy::dense());
  for (const auto& st : all_strategies()) {
    const sd::DistanceOutput part = run(a.view().slice(10, 20), a.view().slice(5, 30), kManhattan, st);
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 25; ++j) EXPECT_EQ(part(i, j), full(10 + i, 5 + j));
    }
  }
}

TEST(Workspace, AccumulatorSizesAndStaging) {
  std::mt19937_64 rng(11);
  const sd::CsrMatrix a = random_csr(40, 200, 0.2, rng);
  const sd::CsrMatrix b = random_csr(30, 200, 0.2, rng);

  const sd::PairwiseResult dense = sd::pairwise_generalized(a, b, kManhattan, ExecutionStrategy::dense());
  EXPECT_EQ(dense.pass1.accumulator_slots, 200u);
  EXPECT_EQ(dense.pass1.workspace_elements, b.nnz());
  ASSERT_TRUE(dense.pass2.has_value());
  EXPECT_EQ(dense.pass2->workspace_elements, a.nnz());

  const sd::PairwiseResult hash = sd::pairwise_generalized(a, b, kManhattan, ExecutionStrategy::hash(16, 0.5));
  EXPECT_EQ(hash.pass1.accumulator_slots, 16u);
  EXPECT_LE(hash.pass1.workspace_elements, b.nnz());
  EXPECT_LE(hash.total().peak_accumulator_entries, 8u);
  EXPECT_LE(hash.total().peak_load_factor(), 0.5);
  EXPECT_GT(hash.pass1.chunks_executed, a.n_rows());

  const sd::PairwiseResult dot = sd::pairwise_generalized(a, b, sd::kDotProduct, ExecutionStrategy::dense());
  EXPECT_FALSE(dot.pass2.has_value());
}

TEST(Generalized, TypeErasedAndStaticAgree) {
  std::mt19937_64 rng(12);
  const sd::CsrMatrix a = random_csr(15, 30, 0.3, rng, Values::Signed);
  const sd::CsrMatrix b = random_csr(12, 30, 0.3, rng, Values::Signed);
  const sd::StaticSemiring<sd::ops::AbsDiff, sd::ops::Plus> fixed{{}, {}, 0.0, 0.0, false};
  for (const auto& st : all_strategies()) EXPECT_EQ(run(a, b, kManhattan, st), run(a, b, fixed, st));
}
