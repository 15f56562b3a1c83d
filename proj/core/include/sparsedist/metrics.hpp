#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsedist/csr.hpp"
#include "sparsedist/distance_output.hpp"
#include "sparsedist/norms.hpp"
#include "sparsedist/semiring.hpp"
#include "sparsedist/strategy.hpp"

namespace sparsedist {

enum class MetricId {
  // Dot-product based: one pass, then an element-wise expansion.
  Correlation,
  Cosine,
  Dice,
  Dot,
  Euclidean,
  Hellinger,
  Jaccard,
  KLDivergence,
  RusselRao,
  // Non-annihilating product: two passes over the column union.
  Canberra,
  Chebyshev,
  Hamming,
  JensenShannon,
  Manhattan,
  Minkowski,
};

/// Lowercase CLI names, in MetricId order.
std::span<const std::string_view> metric_names() noexcept;
std::string_view to_string(MetricId id) noexcept;
MetricId parse_metric(std::string_view name);

struct MetricParams {
  /// Minkowski exponent, p >= 1.
  std::optional<double> p;
  /// KL-divergence with a stored a_i over an absent b_i: strict raises
  /// DomainError, permissive writes kKlSaturation.
  bool strict = true;
};

inline constexpr double kKlSaturation = 1e308;
/// Radicands down to -kNegativeClamp are treated as rounding noise and
/// clamped to zero; anything more negative is a DomainError.
inline constexpr double kNegativeClamp = 1e-9;

/// One row's worth of the norms a metric asked for; unrequested kinds are 0.
struct NormRow {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l2sq = 0.0;
  double sum = 0.0;
};

/// Norm vectors of one matrix, for the kinds a metric needs.
struct NormSet {
  std::vector<NormVector> vectors;

  static NormSet compute(const CsrView& m, std::span<const NormKind> kinds);
  NormRow row(std::size_t i) const;
  std::size_t size() const noexcept { return vectors.empty() ? 0 : vectors.front().values.size(); }
};

using ExpansionFn = double (*)(double dot, const NormRow& a, const NormRow& b, double k);
using PostScaleFn = double (*)(double x, const MetricParams& params, double k);

struct MetricSpec {
  MetricId id = MetricId::Euclidean;
  std::string name;
  Semiring semiring = dot_product_semiring();
  int passes = 1;
  std::vector<NormKind> norms;
  ExpansionFn expansion = nullptr;
  PostScaleFn post_scale = nullptr;
  MetricParams params;
  /// KL, Jensen-Shannon and Hellinger are only defined on non-negative data.
  bool requires_nonnegative = false;
};

/// Throws UnknownMetric, MissingParam (Minkowski without p) or InvalidParam
/// (Minkowski p < 1).
MetricSpec metric_registry(std::string_view name, const MetricParams& params = {});
MetricSpec metric_registry(MetricId id, const MetricParams& params = {});

struct PhaseTimings {
  double norms = 0.0;
  double pass1 = 0.0;
  double pass2 = 0.0;
  double expansion = 0.0;
};

struct DistanceRun {
  DistanceOutput out;
  WorkspaceReport pass1;
  std::optional<WorkspaceReport> pass2;
  PhaseTimings timings;
  ExecutionStrategy strategy;
};

/// d(A_i, B_j) for every pair. Throws DimensionMismatch or DomainError.
DistanceOutput pairwise_distances(const CsrView& a, const CsrView& b, const MetricSpec& spec,
                                  const ExecutionStrategy& strat = {});

/// Same computation, also returning workspace reports and phase timings.
DistanceRun pairwise_distances_run(const CsrView& a, const CsrView& b, const MetricSpec& spec,
                                   const ExecutionStrategy& strat = {});

/// Element-wise expansion and post-scaling of the semiring output. `k` is
/// the number of columns.
DistanceOutput expansion_apply(DistanceOutput dots, const NormSet& norms_a, const NormSet& norms_b,
                               const MetricSpec& spec, std::size_t k);

}  // namespace sparsedist
