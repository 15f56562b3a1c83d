#include "sparsedist/metrics.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "sparsedist/engine.hpp"
#include "sparsedist/error.hpp"

namespace sparsedist {

namespace {

constexpr std::array<std::string_view, 15> kNames = {
    "correlation", "cosine",   "dice",    "dot",     "euclidean",     "hellinger", "jaccard",   "kl",
    "russelrao",   "canberra", "chebyshev", "hamming", "jensenshannon", "manhattan", "minkowski",
};

// Product monoids of the catalog. Each is evaluated by the engine only on
// columns where at least one side is stored (never on 0, 0).

struct KLProduct {
  double operator()(double a, double b) const { return a == 0.0 ? 0.0 : a * std::log(a / b); }
};
struct SqrtProduct {
  double operator()(double a, double b) const { return std::sqrt(a) * std::sqrt(b); }
};
struct CanberraProduct {
  double operator()(double a, double b) const {
    const double den = std::abs(a) + std::abs(b);
    return den == 0.0 ? 0.0 : std::abs(a - b) / den;
  }
};
struct NotEqualProduct {
  double operator()(double a, double b) const { return a != b ? 1.0 : 0.0; }
};
struct JensenShannonProduct {
  double operator()(double a, double b) const {
    const double mu = 0.5 * (a + b);
    double r = 0.0;
    if (a > 0.0) r += a * std::log(a / mu);
    if (b > 0.0) r += b * std::log(b / mu);
    return r;
  }
};
struct PowAbsDiff {
  double p = 1.0;
  double operator()(double a, double b) const { return std::pow(std::abs(a - b), p); }
};
struct CountProduct {
  double operator()(double, double) const { return 1.0; }
};

template <class P>
using Annihilating = StaticSemiring<P, ops::Plus>;
template <class P, class R = ops::Plus>
using Namm = StaticSemiring<P, R>;

constexpr Annihilating<KLProduct> kKL{{}, {}, 1.0, 0.0, true};
constexpr Annihilating<SqrtProduct> kSqrtDot{{}, {}, 1.0, 0.0, true};
constexpr Annihilating<CountProduct> kCount{{}, {}, 1.0, 0.0, true};
constexpr Namm<CanberraProduct> kCanberra{{}, {}, 0.0, 0.0, false};
constexpr Namm<ops::AbsDiff, ops::Max> kChebyshev{{}, {}, 0.0, 0.0, false};
constexpr Namm<NotEqualProduct> kHamming{{}, {}, 0.0, 0.0, false};
constexpr Namm<JensenShannonProduct> kJensenShannon{{}, {}, 0.0, 0.0, false};
constexpr Namm<ops::AbsDiff> kManhattan{{}, {}, 0.0, 0.0, false};

Namm<PowAbsDiff> minkowski_semiring(double p) { return {PowAbsDiff{p}, {}, 0.0, 0.0, false}; }

double checked_sqrt(double x) {
  if (x < -kNegativeClamp) {
    throw Error(Errc::DomainError, "negative radicand " + std::to_string(x) + " in distance expansion");
  }
  return x <= 0.0 ? 0.0 : std::sqrt(x);
}

// Rows with a zero denominator: identical if both are empty, maximally
// distant otherwise.
double degenerate(bool a_empty, bool b_empty) { return a_empty && b_empty ? 0.0 : 1.0; }

double expand_identity(double dot, const NormRow&, const NormRow&, double) { return dot; }

double expand_correlation(double dot, const NormRow& a, const NormRow& b, double k) {
  if (a.l2sq == 0.0 || b.l2sq == 0.0) return degenerate(a.l2sq == 0.0, b.l2sq == 0.0);
  const double num = k * dot - a.sum * b.sum;
  const double rad = (k * a.l2sq - a.sum * a.sum) * (k * b.l2sq - b.sum * b.sum);
  if (rad < -kNegativeClamp) throw Error(Errc::DomainError, "negative variance product in correlation");
  if (rad <= 0.0) return 1.0;
  return std::max(0.0, 1.0 - num / std::sqrt(rad));
}

double expand_cosine(double dot, const NormRow& a, const NormRow& b, double) {
  const double den = a.l2 * b.l2;
  if (den == 0.0) return degenerate(a.l2 == 0.0, b.l2 == 0.0);
  // |cos| can exceed 1 by an ulp; a self-distance of -2e-16 would break ties.
  return std::max(0.0, 1.0 - dot / den);
}

double expand_dice(double dot, const NormRow& a, const NormRow& b, double) {
  const double den = a.l0 + b.l0;
  if (den == 0.0) return 0.0;
  return 1.0 - 2.0 * dot / den;
}

double expand_jaccard(double dot, const NormRow& a, const NormRow& b, double) {
  if (a.l0 == 0.0 && b.l0 == 0.0) return 0.0;
  const double den = a.l0 + b.l0 - dot;
  if (den == 0.0) return 1.0;
  return 1.0 - dot / den;
}

double expand_euclidean(double dot, const NormRow& a, const NormRow& b, double) {
  return a.l2sq - 2.0 * dot + b.l2sq;
}

// (1/sqrt 2) * sqrt(sum (sqrt x - sqrt y)^2) = sqrt((|x|_1 + |y|_1) / 2 - <sqrt x, sqrt y>)
// for non-negative rows; for unit-mass rows this is sqrt(1 - <sqrt x, sqrt y>).
double expand_hellinger(double dot, const NormRow& a, const NormRow& b, double) {
  return 0.5 * (a.l1 + b.l1) - dot;
}

double expand_russelrao(double dot, const NormRow&, const NormRow&, double k) {
  return k == 0.0 ? 0.0 : (k - dot) / k;
}

double post_sqrt(double x, const MetricParams&, double) { return checked_sqrt(x); }
double post_half_sqrt(double x, const MetricParams&, double) { return checked_sqrt(0.5 * x); }
double post_root_p(double x, const MetricParams& p, double) { return std::pow(x, 1.0 / *p.p); }
double post_over_k(double x, const MetricParams&, double k) { return k == 0.0 ? 0.0 : x / k; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_nonnegative(const CsrView& m, const char* which, const MetricSpec& spec) {
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (double v : m.row(r).vals) {
      if (v < 0.0) {
        throw Error(Errc::DomainError,
                    spec.name + " requires non-negative input; row " + std::to_string(r) + " of " + which + " has " +
                        std::to_string(v));
      }
    }
  }
}

template <SemiringOps S>
void run_engine(const CsrView& a, const CsrView& b, const S& s, const ExecutionStrategy& st, DistanceRun& run) {
  run.out = DistanceOutput(a.n_rows(), b.n_rows(), s.reduce_identity());
  auto t0 = std::chrono::steady_clock::now();
  run.pass1 = pairwise_spmv_pass1(a, b, s, st, run.out);
  run.timings.pass1 = seconds_since(t0);
  if (!s.annihilating()) {
    t0 = std::chrono::steady_clock::now();
    run.pass2 = pairwise_spmv_pass2(a, b, s, st, run.out);
    run.timings.pass2 = seconds_since(t0);
  }
}

// Cells where row i of A stores a column that row j of B does not; the KL
// term a*log(a/0) is unbounded there.
void apply_kl_coverage(const CsrView& a, const CsrView& b, const ExecutionStrategy& st, const NormSet& norms_a,
                       const MetricSpec& spec, DistanceRun& run) {
  const PairwiseResult shared = pairwise_generalized(a, b, kCount, st);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const double stored = norms_a.row(i).l0;
    for (std::size_t j = 0; j < b.n_rows(); ++j) {
      if (shared.out(i, j) == stored) continue;
      if (spec.params.strict) {
        throw Error(Errc::DomainError, "kl: row " + std::to_string(i) + " of A has mass on columns absent from row " +
                                           std::to_string(j) + " of B");
      }
      run.out(i, j) = kKlSaturation;
    }
  }
}

}  // namespace

std::span<const std::string_view> metric_names() noexcept { return kNames; }

std::string_view to_string(MetricId id) noexcept { return kNames[static_cast<std::size_t>(id)]; }

MetricId parse_metric(std::string_view name) {
  for (std::size_t t = 0; t < kNames.size(); ++t) {
    if (kNames[t] == name) return static_cast<MetricId>(t);
  }
  throw Error(Errc::UnknownMetric, "'" + std::string(name) + "'");
}

NormSet NormSet::compute(const CsrView& m, std::span<const NormKind> kinds) {
  NormSet set;
  for (NormKind k : kinds) set.vectors.push_back(row_norms(m, k));
  return set;
}

NormRow NormSet::row(std::size_t i) const {
  NormRow r;
  for (const NormVector& v : vectors) {
    const double x = v.values[i];
    switch (v.kind) {
      case NormKind::L0: r.l0 = x; break;
      case NormKind::L1: r.l1 = x; break;
      case NormKind::L2: r.l2 = x; break;
      case NormKind::L2Squared: r.l2sq = x; break;
      case NormKind::Sum: r.sum = x; break;
    }
  }
  return r;
}

MetricSpec metric_registry(std::string_view name, const MetricParams& params) {
  return metric_registry(parse_metric(name), params);
}

MetricSpec metric_registry(MetricId id, const MetricParams& params) {
  MetricSpec s;
  s.id = id;
  s.name = std::string(to_string(id));
  s.params = params;
  switch (id) {
    case MetricId::Correlation:
      s.norms = {NormKind::Sum, NormKind::L2Squared};
      s.expansion = expand_correlation;
      break;
    case MetricId::Cosine:
      s.norms = {NormKind::L2};
      s.expansion = expand_cosine;
      break;
    case MetricId::Dice:
      s.norms = {NormKind::L0};
      s.expansion = expand_dice;
      break;
    case MetricId::Dot:
      s.expansion = expand_identity;
      break;
    case MetricId::Euclidean:
      s.norms = {NormKind::L2Squared};
      s.expansion = expand_euclidean;
      s.post_scale = post_sqrt;
      break;
    case MetricId::Hellinger:
      s.semiring = Semiring::from("sqrt_dot", kSqrtDot);
      s.norms = {NormKind::L1};
      s.expansion = expand_hellinger;
      s.post_scale = post_sqrt;
      s.requires_nonnegative = true;
      break;
    case MetricId::Jaccard:
      s.norms = {NormKind::L0};
      s.expansion = expand_jaccard;
      break;
    case MetricId::KLDivergence:
      s.semiring = Semiring::from("kl", kKL);
      s.norms = {NormKind::L0};
      s.expansion = expand_identity;
      s.requires_nonnegative = true;
      break;
    case MetricId::RusselRao:
      s.expansion = expand_russelrao;
      break;
    case MetricId::Canberra:
      s.semiring = Semiring::from("canberra", kCanberra);
      break;
    case MetricId::Chebyshev:
      s.semiring = Semiring::from("chebyshev", kChebyshev);
      break;
    case MetricId::Hamming:
      s.semiring = Semiring::from("hamming", kHamming);
      s.post_scale = post_over_k;
      break;
    case MetricId::JensenShannon:
      s.semiring = Semiring::from("jensenshannon", kJensenShannon);
      s.post_scale = post_half_sqrt;
      s.requires_nonnegative = true;
      break;
    case MetricId::Manhattan:
      s.semiring = Semiring::from("manhattan", kManhattan);
      break;
    case MetricId::Minkowski:
      if (!params.p) throw Error(Errc::MissingParam, "minkowski requires p");
      if (!std::isfinite(*params.p) || *params.p < 1.0) {
        throw Error(Errc::InvalidParam, "minkowski p must be a finite value >= 1");
      }
      s.semiring = Semiring::from("minkowski", minkowski_semiring(*params.p));
      s.post_scale = post_root_p;
      break;
  }
  s.passes = s.semiring.passes();
  return s;
}

DistanceOutput expansion_apply(DistanceOutput dots, const NormSet& norms_a, const NormSet& norms_b,
                               const MetricSpec& spec, std::size_t k) {
  if (!spec.expansion && !spec.post_scale) return dots;
  if (spec.expansion && (norms_a.size() != 0 || norms_b.size() != 0) &&
      (norms_a.size() != dots.rows() || norms_b.size() != dots.cols())) {
    throw Error(Errc::DimensionMismatch, "norm vectors do not match the output shape");
  }
  const auto kd = static_cast<double>(k);
  for (std::size_t i = 0; i < dots.rows(); ++i) {
    const NormRow na = norms_a.vectors.empty() ? NormRow{} : norms_a.row(i);
    std::span<double> row = dots.row(i);
    for (std::size_t j = 0; j < dots.cols(); ++j) {
      double x = row[j];
      if (spec.expansion) x = spec.expansion(x, na, norms_b.vectors.empty() ? NormRow{} : norms_b.row(j), kd);
      if (spec.post_scale) x = spec.post_scale(x, spec.params, kd);
      row[j] = x;
    }
  }
  return dots;
}

DistanceRun pairwise_distances_run(const CsrView& a, const CsrView& b, const MetricSpec& spec,
                                   const ExecutionStrategy& strat) {
  check_same_cols(a, b);
  if (spec.requires_nonnegative) {
    check_nonnegative(a, "A", spec);
    check_nonnegative(b, "B", spec);
  }
  DistanceRun run;
  run.strategy = resolve(strat, a, b);
  const ExecutionStrategy& st = run.strategy;

  auto t0 = std::chrono::steady_clock::now();
  const NormSet norms_a = NormSet::compute(a, spec.norms);
  const NormSet norms_b = NormSet::compute(b, spec.norms);
  run.timings.norms = seconds_since(t0);

  switch (spec.id) {
    case MetricId::Correlation:
    case MetricId::Cosine:
    case MetricId::Dice:
    case MetricId::Dot:
    case MetricId::Euclidean:
    case MetricId::Jaccard:
    case MetricId::RusselRao: run_engine(a, b, kDotProduct, st, run); break;
    case MetricId::Hellinger: run_engine(a, b, kSqrtDot, st, run); break;
    case MetricId::KLDivergence: run_engine(a, b, kKL, st, run); break;
    case MetricId::Canberra: run_engine(a, b, kCanberra, st, run); break;
    case MetricId::Chebyshev: run_engine(a, b, kChebyshev, st, run); break;
    case MetricId::Hamming: run_engine(a, b, kHamming, st, run); break;
    case MetricId::JensenShannon: run_engine(a, b, kJensenShannon, st, run); break;
    case MetricId::Manhattan: run_engine(a, b, kManhattan, st, run); break;
    case MetricId::Minkowski: run_engine(a, b, minkowski_semiring(*spec.params.p), st, run); break;
  }

  t0 = std::chrono::steady_clock::now();
  run.out = expansion_apply(std::move(run.out), norms_a, norms_b, spec, a.n_cols());
  if (spec.id == MetricId::KLDivergence) apply_kl_coverage(a, b, st, norms_a, spec, run);
  run.timings.expansion = seconds_since(t0);
  return run;
}

DistanceOutput pairwise_distances(const CsrView& a, const CsrView& b, const MetricSpec& spec,
                                  const ExecutionStrategy& strat) {
  return pairwise_distances_run(a, b, spec, strat).out;
}

}  // namespace sparsedist
