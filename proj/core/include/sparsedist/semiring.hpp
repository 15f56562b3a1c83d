#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace sparsedist {

/// Anything the engine can evaluate: a product monoid, a reduce monoid with
/// its identity, and whether structurally absent entries annihilate the
/// product. Annihilating semirings only need the intersection of nonzero
/// columns (one pass); the rest need the full union (two passes).
template <class S>
concept SemiringOps = requires(const S& s, double a, double b) {
  { s.product(a, b) } -> std::convertible_to<double>;
  { s.reduce(a, b) } -> std::convertible_to<double>;
  { s.reduce_identity() } -> std::convertible_to<double>;
  { s.annihilating() } -> std::convertible_to<bool>;
};

namespace ops {

struct Plus {
  double operator()(double a, double b) const noexcept { return a + b; }
};
struct Max {
  double operator()(double a, double b) const noexcept { return a < b ? b : a; }
};
struct Min {
  double operator()(double a, double b) const noexcept { return b < a ? b : a; }
};
struct Times {
  double operator()(double a, double b) const noexcept { return a * b; }
};
struct AbsDiff {
  double operator()(double a, double b) const noexcept { return std::abs(a - b); }
};

}  // namespace ops

/// Semiring with its operators fixed at compile time so the engine can
/// inline them. The same struct backs the type-erased Semiring below.
template <class Product, class Reduce>
struct StaticSemiring {
  Product product_op{};
  Reduce reduce_op{};
  double product_id = 0.0;
  double reduce_id = 0.0;
  bool annihilates = false;

  double product(double a, double b) const { return product_op(a, b); }
  double reduce(double a, double b) const { return reduce_op(a, b); }
  double product_identity() const noexcept { return product_id; }
  double reduce_identity() const noexcept { return reduce_id; }
  bool annihilating() const noexcept { return annihilates; }
};

/// Runtime-configurable semiring. Slower than a StaticSemiring (one indirect
/// call per product/reduce) but lets callers build new distances without
/// recompiling the engine.
class Semiring {
 public:
  using BinaryOp = std::function<double(double, double)>;

  Semiring(std::string name, BinaryOp product, double product_identity, BinaryOp reduce, double reduce_identity,
           bool annihilating)
      : name_(std::move(name)),
        product_(std::move(product)),
        reduce_(std::move(reduce)),
        product_identity_(product_identity),
        reduce_identity_(reduce_identity),
        annihilating_(annihilating) {}

  template <class P, class R>
  static Semiring from(std::string name, const StaticSemiring<P, R>& s) {
    return Semiring(std::move(name), s.product_op, s.product_id, s.reduce_op, s.reduce_id, s.annihilates);
  }

  double product(double a, double b) const { return product_(a, b); }
  double reduce(double a, double b) const { return reduce_(a, b); }
  double product_identity() const noexcept { return product_identity_; }
  double reduce_identity() const noexcept { return reduce_identity_; }
  bool annihilating() const noexcept { return annihilating_; }
  int passes() const noexcept { return annihilating_ ? 1 : 2; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  BinaryOp product_;
  BinaryOp reduce_;
  double product_identity_;
  double reduce_identity_;
  bool annihilating_;
};

using DotProductSemiring = StaticSemiring<ops::Times, ops::Plus>;
using MinPlusSemiring = StaticSemiring<ops::Plus, ops::Min>;

/// ({+, 0}, {*, 1}); zero annihilates the product.
inline constexpr DotProductSemiring kDotProduct{{}, {}, 1.0, 0.0, true};

/// Tropical ({min, +inf}, {+, 0}). Absent entries stand for +inf, which
/// annihilates + and equals the reduce identity, so only columns stored in
/// both rows contribute.
inline constexpr MinPlusSemiring kMinPlus{{}, {}, 0.0, std::numeric_limits<double>::infinity(), true};

inline Semiring dot_product_semiring() { return Semiring::from("dot", kDotProduct); }
inline Semiring tropical_semiring() { return Semiring::from("min_plus", kMinPlus); }

/// Non-annihilating product monoid with identity 0, reduced by `reduce`.
inline Semiring namm_semiring(std::string name, Semiring::BinaryOp product, Semiring::BinaryOp reduce = ops::Plus{},
                              double reduce_identity = 0.0) {
  return Semiring(std::move(name), std::move(product), 0.0, std::move(reduce), reduce_identity, false);
}

}  // namespace sparsedist
