#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sparsedist/csr.hpp"
#include "sparsedist/error.hpp"
#include "sparsedist/io/generate.hpp"
#include "sparsedist/norms.hpp"

namespace sd = sparsedist;
namespace sio = sparsedist::io;
using sio::DegreeDist;

TEST(Generate, UniformZeroIsEmpty) {
  const sd::CsrMatrix m = sio::generate({50, 20, DegreeDist::uniform(0), {}, 1});
  EXPECT_EQ(m.n_rows(), 50u);
  EXPECT_EQ(m.nnz(), 0u);
}

TEST(Generate, Deterministic) {
  const sio::GenSpec spec{1000, 1000, DegreeDist::zipf(1.1, 500), sio::ValueDist::TfIdf, 7};
  EXPECT_EQ(sio::generate(spec), sio::generate(spec));
  sio::GenSpec other = spec;
  other.seed = 8;
  EXPECT_NE(sio::generate(spec), sio::generate(other));
}

TEST(Generate, UniformDegreeIsExact) {
  const sd::CsrMatrix m = sio::generate({10000, 10000, DegreeDist::uniform(50), {}, 3});
  EXPECT_EQ(m.nnz(), 500000u);
  const sd::DegreeStats s = sd::degree_stats(m);
  EXPECT_EQ(s.min, 50u);
  EXPECT_EQ(s.max, 50u);
}

TEST(Generate, CanonicalAndPositive) {
  for (auto values : {sio::ValueDist::Uniform01, sio::ValueDist::TfIdf}) {
    const sd::CsrMatrix m = sio::generate({300, 200, DegreeDist::zipf(1.3, 200), values, 5});
    EXPECT_TRUE(sd::is_canonical(sd::to_raw(m)));
    for (double v : m.values()) {
      EXPECT_GT(v, 0.0);
      if (values == sio::ValueDist::Uniform01) EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Generate, FullDensityRow) {
  const sd::CsrMatrix m = sio::generate({3, 17, DegreeDist::uniform(17), {}, 2});
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(m.degree(r), 17u);
}

// One-sample Kolmogorov-Smirnov statistic of the realized degrees against
// the requested law; 1.63/sqrt(n) is the 1% critical value.
TEST(Generate, ZipfDegreesPassKolmogorovSmirnov) {
  const DegreeDist dd = DegreeDist::zipf(1.1, 500);
  const std::size_t n = 5000;
  const sd::CsrMatrix m = sio::generate({n, 2000, dd, {}, 11});
  const sd::DegreeStats s = sd::degree_stats(m);
  double d_max = 0.0, cum = 0.0;
  for (std::size_t d = 0; d < s.histogram.size(); ++d) {
    cum += static_cast<double>(s.histogram[d]);
    d_max = std::max(d_max, std::abs(cum / static_cast<double>(n) - dd.cdf(d)));
  }
  EXPECT_LT(d_max, 1.63 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(s.mean, dd.mean(), 0.1 * dd.mean());
  EXPECT_GE(s.min, 1u);
  EXPECT_LE(s.max, 500u);
}

TEST(Generate, ColumnsAreUniform) {
  const std::size_t cols = 20;
  const sd::CsrMatrix m = sio::generate({20000, cols, DegreeDist::uniform(5), {}, 4});
  std::vector<double> count(cols, 0.0);
  for (sd::col_t c : m.indices()) count[c] += 1.0;
  const double expect = static_cast<double>(m.nnz()) / cols;
  double chi2 = 0.0;
  for (double c : count) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 43.8);  // chi-square, 19 dof, p = 0.001
}

TEST(DegreeDist, Parse) {
  const DegreeDist u = DegreeDist::parse("uniform:12", 100);
  EXPECT_EQ(u.kind, DegreeDist::Kind::Uniform);
  EXPECT_EQ(u.degree, 12u);
  const DegreeDist z = DegreeDist::parse("zipf:1.1:500", 1000);
  EXPECT_EQ(z.kind, DegreeDist::Kind::Zipf);
  EXPECT_DOUBLE_EQ(z.exponent, 1.1);
  EXPECT_EQ(z.max_degree, 500u);
  EXPECT_EQ(DegreeDist::parse("density:0.05", 1000).degree, 50u);
  for (const char* bad : {"", "uniform", "uniform:x", "zipf:1.1", "density:2", "poisson:3"}) {
    EXPECT_THROW(DegreeDist::parse(bad, 100), sd::Error) << bad;
  }
}

TEST(DegreeDist, ZipfMomentsAndCdf) {
  const DegreeDist z = DegreeDist::zipf(1.0, 3);
  // weights 1, 1/2, 1/3 -> total 11/6
  EXPECT_NEAR(z.cdf(1), 6.0 / 11.0, 1e-15);
  EXPECT_NEAR(z.cdf(3), 1.0, 1e-15);
  EXPECT_NEAR(z.mean(), 3.0 / (11.0 / 6.0), 1e-12);
}

TEST(Generate, InvalidSpecs) {
  auto code = [](const sio::GenSpec& s) {
    try {
      sio::generate(s);
    } catch (const sd::Error& e) {
      return e.code();
    }
    return sd::Errc::IoError;
  };
  EXPECT_EQ(code({10, 5, DegreeDist::uniform(6), {}, 0}), sd::Errc::InvalidSpec);
  EXPECT_EQ(code({10, 5, DegreeDist::zipf(1.1, 6), {}, 0}), sd::Errc::InvalidSpec);
  EXPECT_EQ(code({10, 5, DegreeDist::zipf(1.1, 0), {}, 0}), sd::Errc::InvalidSpec);
  EXPECT_EQ(code({10, 5, DegreeDist::zipf(0.0, 3), {}, 0}), sd::Errc::InvalidSpec);
  EXPECT_THROW(sio::parse_value_dist("gaussian"), sd::Error);
}
