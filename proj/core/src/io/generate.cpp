#include "sparsedist/io/generate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <unordered_set>

#include "sparsedist/error.hpp"

namespace sparsedist::io {

namespace {

template <class T>
T parse_field(std::string_view tok, std::string_view whole) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(Errc::InvalidSpec, "bad degree distribution '" + std::string(whole) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> zipf_weights(const DegreeDist& d) {
  std::vector<double> w(d.max_degree);
  for (std::size_t k = 1; k <= d.max_degree; ++k) w[k - 1] = std::pow(static_cast<double>(k), -d.exponent);
  return w;
}

// Floyd's algorithm: `count` distinct values from [0, n), returned sorted.
void sample_distinct(std::size_t n, std::size_t count, std::mt19937_64& rng, std::vector<col_t>& out,
                     std::unordered_set<col_t>& seen) {
  out.clear();
  seen.clear();
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<col_t>(std::uniform_int_distribution<std::size_t>(0, j)(rng));
    const col_t pick = seen.insert(t).second ? t : static_cast<col_t>(j);
    if (pick != t) seen.insert(pick);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

DegreeDist DegreeDist::parse(std::string_view text, std::size_t n_cols) {
  const auto parts = split(text, ':');
  if (parts.size() == 2 && parts[0] == "uniform") return uniform(parse_field<std::size_t>(parts[1], text));
  if (parts.size() == 3 && parts[0] == "zipf") {
    return zipf(parse_field<double>(parts[1], text), parse_field<std::size_t>(parts[2], text));
  }
  if (parts.size() == 2 && parts[0] == "density") {
    const double f = parse_field<double>(parts[1], text);
    if (!(f >= 0.0 && f <= 1.0)) throw Error(Errc::InvalidSpec, "density must be in [0, 1]");
    return uniform(static_cast<std::size_t>(std::llround(f * static_cast<double>(n_cols))));
  }
  throw Error(Errc::InvalidSpec, "degree distribution '" + std::string(text) +
                                     "' (expected uniform:D, zipf:S:MAX or density:F)");
}

double DegreeDist::mean() const {
  if (kind == Kind::Uniform) return static_cast<double>(degree);
  const auto w = zipf_weights(*this);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k <= max_degree; ++k) {
    num += static_cast<double>(k) * w[k - 1];
    den += w[k - 1];
  }
  return num / den;
}

double DegreeDist::cdf(std::size_t d) const {
  if (kind == Kind::Uniform) return d >= degree ? 1.0 : 0.0;
  const auto w = zipf_weights(*this);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k <= max_degree; ++k) {
    if (k <= d) num += w[k - 1];
    den += w[k - 1];
  }
  return num / den;
}

ValueDist parse_value_dist(std::string_view name) {
  if (name == "uniform01") return ValueDist::Uniform01;
  if (name == "tfidf") return ValueDist::TfIdf;
  throw Error(Errc::InvalidSpec, "value distribution '" + std::string(name) + "' (uniform01|tfidf)");
}

CsrMatrix generate(const GenSpec& spec) {
  const DegreeDist& dd = spec.degrees;
  if (dd.kind == DegreeDist::Kind::Uniform && dd.degree > spec.n_cols) {
    throw Error(Errc::InvalidSpec, "degree " + std::to_string(dd.degree) + " exceeds n_cols " +
                                       std::to_string(spec.n_cols));
  }
  if (dd.kind == DegreeDist::Kind::Zipf) {
    if (dd.max_degree == 0 || dd.max_degree > spec.n_cols) {
      throw Error(Errc::InvalidSpec, "zipf max degree must be in [1, n_cols]");
    }
    if (!(dd.exponent > 0.0)) throw Error(Errc::InvalidSpec, "zipf exponent must be > 0");
  }

  std::mt19937_64 rng(spec.seed);
  std::discrete_distribution<std::size_t> zipf;
  if (dd.kind == DegreeDist::Kind::Zipf) {
    const auto w = zipf_weights(dd);
    zipf = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::geometric_distribution<int> term_count(0.5);

  std::vector<offset_t> indptr(spec.n_rows + 1, 0);
  std::vector<col_t> indices;
  std::vector<double> values;
  indices.reserve(static_cast<std::size_t>(dd.mean() * static_cast<double>(spec.n_rows)));
  values.reserve(indices.capacity());
  std::vector<col_t> cols;
  std::unordered_set<col_t> seen;
  const double n_cols = static_cast<double>(spec.n_cols);

  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    const std::size_t deg = dd.kind == DegreeDist::Kind::Uniform ? dd.degree : zipf(rng) + 1;
    sample_distinct(spec.n_cols, deg, rng, cols, seen);
    for (col_t c : cols) {
      double v = 0.0;
      if (spec.values == ValueDist::Uniform01) {
        v = 1.0 - unit(rng);
      } else {
        const double tf = 1.0 + term_count(rng);
        const double idf = 1.0 + std::log((1.0 + n_cols) / (1.0 + c));
        v = (1.0 + std::log(tf)) * idf;
      }
      indices.push_back(c);
      values.push_back(v);
    }
    indptr[r + 1] = indices.size();
  }
  return CsrMatrix(spec.n_rows, spec.n_cols, std::move(indptr), std::move(indices), std::move(values));
}

}  // namespace sparsedist::io
