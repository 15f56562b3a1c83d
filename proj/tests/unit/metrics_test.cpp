#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sparsedist/error.hpp"
#include "sparsedist/metrics.hpp"
#include "sparsedist/oracle.hpp"
#include "test_util.hpp"

namespace sd = sparsedist;
using sd::ExecutionStrategy;
using sd::MetricId;
using sd::testing::from_dense;
using sd::testing::random_csr;
using sd::testing::Values;

namespace {

sd::MetricParams with_p(double p) {
  sd::MetricParams m;
  m.p = p;
  return m;
}

sd::Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const sd::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return sd::Errc::IoError;
}

sd::DistanceOutput dist(const sd::CsrMatrix& a, const sd::CsrMatrix& b, std::string_view metric,
                        sd::MetricParams p = {}, ExecutionStrategy st = {}) {
  return sd::pairwise_distances(a, b, sd::metric_registry(metric, p), st);
}

}  // namespace

TEST(Registry, NamesRoundTrip) {
  ASSERT_EQ(sd::metric_names().size(), 15u);
  for (std::string_view n : sd::metric_names()) EXPECT_EQ(sd::to_string(sd::parse_metric(n)), n);
  EXPECT_EQ(error_of([] { sd::parse_metric("mahalanobis"); }), sd::Errc::UnknownMetric);
}

TEST(Registry, Manhattan) {
  const sd::MetricSpec s = sd::metric_registry("manhattan");
  EXPECT_EQ(s.passes, 2);
  EXPECT_FALSE(s.semiring.annihilating());
  EXPECT_TRUE(s.norms.empty());
  EXPECT_EQ(s.semiring.product(1.0, 0.0), 1.0);
  EXPECT_EQ(s.semiring.product(0.25, 1.0), 0.75);
  EXPECT_EQ(s.semiring.reduce(2.0, 3.0), 5.0);
  EXPECT_EQ(s.semiring.reduce_identity(), 0.0);
}

TEST(Registry, Euclidean) {
  const sd::MetricSpec s = sd::metric_registry("euclidean");
  EXPECT_EQ(s.passes, 1);
  EXPECT_TRUE(s.semiring.annihilating());
  EXPECT_EQ(s.norms, (std::vector<sd::NormKind>{sd::NormKind::L2Squared}));
  EXPECT_NE(s.expansion, nullptr);
  EXPECT_NE(s.post_scale, nullptr);
}

TEST(Registry, ChebyshevReducesWithMax) {
  const sd::MetricSpec s = sd::metric_registry("chebyshev");
  EXPECT_EQ(s.semiring.reduce(2.0, 3.0), 3.0);
  EXPECT_EQ(s.semiring.reduce_identity(), 0.0);
}

TEST(Registry, PassesFollowAnnihilation) {
  for (std::string_view n : sd::metric_names()) {
    const sd::MetricSpec s = sd::metric_registry(n, with_p(2.0));
    const bool namm = s.id >= MetricId::Canberra;
    EXPECT_EQ(s.passes, namm ? 2 : 1) << n;
    EXPECT_EQ(s.semiring.annihilating(), !namm) << n;
    // Every expanded metric except dot and kl combines norms with the dot product.
    if (!namm && s.id != MetricId::Dot && s.id != MetricId::KLDivergence) EXPECT_NE(s.expansion, nullptr) << n;
  }
}

TEST(Registry, MinkowskiParams) {
  EXPECT_EQ(error_of([] { sd::metric_registry("minkowski"); }), sd::Errc::MissingParam);
  EXPECT_EQ(error_of([] { sd::metric_registry("minkowski", with_p(0.5)); }), sd::Errc::InvalidParam);
  EXPECT_EQ(error_of([] { sd::metric_registry("minkowski", with_p(NAN)); }), sd::Errc::InvalidParam);
  EXPECT_NO_THROW(sd::metric_registry("minkowski", with_p(1.0)));
}

TEST(PairwiseDistances, ManhattanAppendix) {
  const sd::DistanceOutput d = dist(from_dense({{1, 0, 1}}), from_dense({{0, 1, 0}}), "manhattan");
  EXPECT_EQ(d(0, 0), 3.0);
}

TEST(PairwiseDistances, CosineScaleInvariant) {
  std::mt19937_64 rng(1);
  const sd::CsrMatrix a = random_csr(10, 20, 0.3, rng, Values::Signed);
  std::vector<double> vals(a.values());
  for (double& v : vals) v *= 3.7;
  const sd::CsrMatrix b(a.n_rows(), a.n_cols(), a.indptr(), a.indices(), vals);
  const sd::DistanceOutput d = dist(a, b, "cosine");
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    if (a.degree(i) > 0) EXPECT_NEAR(d(i, i), 0.0, 1e-12);
  }
}

TEST(PairwiseDistances, RusselRao) {
  const sd::CsrMatrix a = from_dense({{1, 1, 0, 0}});
  EXPECT_EQ(dist(a, a, "russelrao")(0, 0), 0.5);
}

TEST(PairwiseDistances, MinkowskiTwoIsEuclidean) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const sd::CsrMatrix a = random_csr(1 + t % 13, 1 + t % 32, 0.3, rng);
    const sd::CsrMatrix b = random_csr(1 + t % 7, a.n_cols(), 0.3, rng);
    const sd::DistanceOutput e = dist(a, b, "euclidean"), m = dist(a, b, "minkowski", with_p(2.0));
    EXPECT_LE(sd::testing::max_abs_diff(e, m), 1e-9);
  }
}

TEST(PairwiseDistances, EuclideanSelfDistanceIsExactlyZero) {
  std::mt19937_64 rng(3);
  const sd::CsrMatrix a = random_csr(30, 50, 0.3, rng, Values::Signed);
  for (const auto& st : {ExecutionStrategy::naive(), ExecutionStrategy::dense(), ExecutionStrategy::hash()}) {
    const sd::DistanceOutput d = dist(a, a, "euclidean", {}, st);
    for (std::size_t i = 0; i < a.n_rows(); ++i) EXPECT_EQ(d(i, i), 0.0);
  }
}

// Every metric against the literal dense formula, all strategies.
TEST(PairwiseDistances, MatchOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> dim(1, 40), cols(1, 32);
  std::uniform_real_distribution<double> dens(0.05, 0.5);
  for (std::string_view name : sd::metric_names()) {
    const sd::MetricParams params = with_p(name == "minkowski" ? 3.0 : 2.0);
    const Values kind = sd::testing::is_binary_metric(std::string(name)) ? Values::Binary : Values::NonNegative;
    for (int t = 0; t < 12; ++t) {
      const std::size_t k = cols(rng);
      const sd::CsrMatrix a = random_csr(dim(rng), k, dens(rng), rng, kind);
      const sd::CsrMatrix b = name == "kl" ? sd::testing::random_covering(a, dim(rng), dens(rng), rng)
                                           : random_csr(dim(rng), k, dens(rng), rng, kind);
      const auto want = sd::oracle::oracle_pairwise(sd::oracle::densify(a), sd::oracle::densify(b), name,
                                                    {params.p, params.strict});
      for (const auto& st : {ExecutionStrategy::naive(), ExecutionStrategy::dense(), ExecutionStrategy::hash(4)}) {
        const sd::DistanceOutput got = dist(a, b, name, params, st);
        for (std::size_t c = 0; c < want.data.size(); ++c) {
          ASSERT_TRUE(sd::testing::close(got.data()[c], want.data[c], 1e-6, 1e-9))
              << name << " got " << got.data()[c] << " want " << want.data[c];
        }
      }
    }
  }
}

TEST(PairwiseDistances, SignedInputsForSignAgnosticMetrics) {
  std::mt19937_64 rng(5);
  for (std::string_view name : {"correlation", "cosine", "dot", "euclidean", "canberra", "chebyshev", "manhattan",
                                "minkowski"}) {
    for (int t = 0; t < 10; ++t) {
      const sd::CsrMatrix a = random_csr(1 + t, 12, 0.4, rng, Values::Signed);
      const sd::CsrMatrix b = random_csr(2 + t, 12, 0.4, rng, Values::Signed);
      const auto want = sd::oracle::oracle_pairwise(sd::oracle::densify(a), sd::oracle::densify(b), name, {1.5});
      const sd::DistanceOutput got = dist(a, b, name, with_p(1.5));
      for (std::size_t c = 0; c < want.data.size(); ++c) {
        ASSERT_TRUE(sd::testing::close(got.data()[c], want.data[c], 1e-6, 1e-9)) << name;
      }
    }
  }
}

TEST(PairwiseDistances, ChebyshevIsExact) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const sd::CsrMatrix a = random_csr(8, 25, 0.3, rng, Values::Signed);
    const sd::CsrMatrix b = random_csr(9, 25, 0.3, rng, Values::Signed);
    const auto want = sd::oracle::oracle_pairwise(sd::oracle::densify(a), sd::oracle::densify(b), "chebyshev");
    const sd::DistanceOutput got = dist(a, b, "chebyshev");
    for (std::size_t c = 0; c < want.data.size(); ++c) EXPECT_EQ(got.data()[c], want.data[c]);
  }
}

TEST(PairwiseDistances, HammingTimesKIsInteger) {
  std::mt19937_64 rng(7);
  const sd::CsrMatrix a = random_csr(20, 37, 0.3, rng, Values::Binary);
  const sd::CsrMatrix b = random_csr(15, 37, 0.3, rng, Values::Binary);
  const sd::DistanceOutput d = dist(a, b, "hamming");
  for (double v : d.data()) EXPECT_NEAR(v * 37.0, std::round(v * 37.0), 1e-9);
}

TEST(PairwiseDistances, EmptyRows) {
  const sd::CsrMatrix a = from_dense({{0, 0, 0}, {1, 0, 2}});
  for (std::string_view name : {"cosine", "correlation", "dice", "jaccard"}) {
    const sd::DistanceOutput d = dist(a, a, name);
    EXPECT_EQ(d(0, 0), 0.0) << name;
    EXPECT_EQ(d(0, 1), 1.0) << name;
    EXPECT_EQ(d(1, 0), 1.0) << name;
  }
  const sd::DistanceOutput e = dist(a, a, "euclidean");
  EXPECT_DOUBLE_EQ(e(0, 1), std::sqrt(5.0));
}

TEST(PairwiseDistances, KlCoverage) {
  const sd::CsrMatrix a = from_dense({{0.5, 0.5, 0}});
  const sd::CsrMatrix covered = from_dense({{0.25, 0.5, 0.25}});
  const sd::CsrMatrix uncovered = from_dense({{0.5, 0, 0.5}});
  EXPECT_NEAR(dist(a, covered, "kl")(0, 0), 0.5 * std::log(2.0), 1e-15);
  EXPECT_EQ(error_of([&] { dist(a, uncovered, "kl"); }), sd::Errc::DomainError);
  sd::MetricParams permissive;
  permissive.strict = false;
  EXPECT_EQ(dist(a, uncovered, "kl", permissive)(0, 0), sd::kKlSaturation);
  // B stores extra columns A does not: those contribute 0 log(0/b) = 0.
  EXPECT_EQ(dist(from_dense({{1, 0, 0}}), from_dense({{1, 1, 1}}), "kl")(0, 0), 0.0);
}

TEST(PairwiseDistances, NonNegativeDomain) {
  const sd::CsrMatrix neg = from_dense({{-1, 1}});
  const sd::CsrMatrix pos = from_dense({{1, 1}});
  for (std::string_view name : {"kl", "jensenshannon", "hellinger"}) {
    EXPECT_EQ(error_of([&] { dist(neg, pos, name); }), sd::Errc::DomainError) << name;
    EXPECT_EQ(error_of([&] { dist(pos, neg, name); }), sd::Errc::DomainError) << name;
  }
}

TEST(PairwiseDistances, DimensionMismatch) {
  EXPECT_EQ(error_of([] { dist(sd::CsrMatrix::zeros(1, 3), sd::CsrMatrix::zeros(1, 4), "euclidean"); }),
            sd::Errc::DimensionMismatch);
}

TEST(PairwiseDistances, AxiomsOnPositiveData) {
  std::mt19937_64 rng(8);
  const sd::CsrMatrix x = random_csr(25, 16, 0.4, rng);
  const std::vector<std::pair<std::string_view, double>> metrics{
      {"euclidean", 2}, {"manhattan", 1}, {"minkowski", 1.5}, {"minkowski", 3}, {"chebyshev", 1}, {"canberra", 1}};
  for (const auto& [name, p] : metrics) {
    const sd::DistanceOutput d = dist(x, x, name, with_p(p));
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
      EXPECT_LE(std::abs(d(i, i)), 1e-9) << name;
      for (std::size_t j = 0; j < x.n_rows(); ++j) {
        EXPECT_LE(std::abs(d(i, j) - d(j, i)), 1e-9) << name;
        for (std::size_t l = 0; l < x.n_rows(); ++l) EXPECT_LE(d(i, l), d(i, j) + d(j, l) + 1e-9) << name;
      }
    }
  }
}

TEST(ExpansionApply, HandExamples) {
  const sd::MetricSpec euc = sd::metric_registry("euclidean");
  sd::NormSet na{{{sd::NormKind::L2Squared, {2.0}}}}, nb{{{sd::NormKind::L2Squared, {1.0}}}};
  sd::DistanceOutput dots(1, 1, 1.0);
  EXPECT_EQ(sd::expansion_apply(dots, na, nb, euc, 3)(0, 0), 1.0);

  const sd::MetricSpec jac = sd::metric_registry("jaccard");
  sd::NormSet l0{{{sd::NormKind::L0, {5.0}}}};
  EXPECT_EQ(sd::expansion_apply(sd::DistanceOutput(1, 1, 5.0), l0, l0, jac, 9)(0, 0), 0.0);

  const sd::MetricSpec hel = sd::metric_registry("hellinger");
  sd::NormSet unit{{{sd::NormKind::L1, {1.0}}}};
  EXPECT_EQ(sd::expansion_apply(sd::DistanceOutput(1, 1, 1.0), unit, unit, hel, 4)(0, 0), 0.0);
}

TEST(ExpansionApply, NegativeRadicands) {
  const sd::MetricSpec euc = sd::metric_registry("euclidean");
  sd::NormSet one{{{sd::NormKind::L2Squared, {1.0}}}};
  // 1 - 2 * (1 + 1e-12) + 1 is rounding noise and clamps to 0.
  EXPECT_EQ(sd::expansion_apply(sd::DistanceOutput(1, 1, 1.0 + 1e-12), one, one, euc, 2)(0, 0), 0.0);
  EXPECT_EQ(error_of([&] { sd::expansion_apply(sd::DistanceOutput(1, 1, 1.5), one, one, euc, 2); }),
            sd::Errc::DomainError);
}

TEST(PairwiseDistancesRun, ReportsPhases) {
  std::mt19937_64 rng(9);
  const sd::CsrMatrix a = random_csr(30, 40, 0.2, rng);
  const sd::DistanceRun r = sd::pairwise_distances_run(a, a, sd::metric_registry("manhattan"), {});
  EXPECT_TRUE(r.pass2.has_value());
  EXPECT_EQ(r.pass1.workspace_elements, a.nnz());
  EXPECT_NE(r.strategy.kind, sd::StrategyKind::Auto);
  const sd::DistanceRun e = sd::pairwise_distances_run(a, a, sd::metric_registry("euclidean"), {});
  EXPECT_FALSE(e.pass2.has_value());
}
