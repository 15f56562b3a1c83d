#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sparsedist/csr.hpp"

namespace sparsedist {

/// 32-bit Murmur3 finalizer.
constexpr std::uint32_t murmur_fmix32(std::uint32_t h) noexcept {
  h ^= h >> 16;
  h *= 0x85ebca6bU;
  h ^= h >> 13;
  h *= 0xc2b2ae35U;
  h ^= h >> 16;
  return h;
}

/// Open-addressing column -> value table with linear probing (stride 1).
/// The capacity is fixed at construction; callers keep the number of
/// entries within the load budget (see plan_chunks), so a probe for an
/// absent key always stops at an empty slot.
class HashAccumulator {
 public:
  static constexpr col_t kEmpty = std::numeric_limits<col_t>::max();

  explicit HashAccumulator(std::size_t capacity);

  /// Clears the table and inserts the given (column, value) pairs.
  /// Columns must be distinct and < kEmpty.
  void build(std::span<const col_t> cols, std::span<const double> vals);

  std::optional<double> probe(col_t col) const noexcept {
    std::size_t slot = home(col);
    while (true) {
      const Slot& e = slots_[slot];
      if (e.key == col) return e.val;
      if (e.key == kEmpty) return std::nullopt;
      slot = next(slot);
    }
  }

  /// Same lookup, returning 0.0 for absent columns (stored values are never
  /// zero in canonical input).
  double probe_or_zero(col_t col) const noexcept {
    std::size_t slot = home(col);
    while (true) {
      const Slot& e = slots_[slot];
      if (e.key == col) return e.val;
      if (e.key == kEmpty) return 0.0;
      slot = next(slot);
    }
  }

  void clear() noexcept;

  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t size() const noexcept { return used_.size(); }
  /// Largest number of entries held at once since construction.
  std::size_t peak_size() const noexcept { return peak_; }
  /// Longest probe sequence observed during build().
  std::size_t max_probe_length() const noexcept { return max_probe_; }

 private:
  std::size_t home(col_t col) const noexcept {
    const std::uint32_t h = murmur_fmix32(col);
    return mask_ != 0 ? (h & mask_) : (h % slots_.size());
  }
  std::size_t next(std::size_t slot) const noexcept { return slot + 1 == slots_.size() ? 0 : slot + 1; }

  struct Slot {
    col_t key = kEmpty;
    double val = 0.0;
  };

  std::vector<Slot> slots_;
  std::vector<std::size_t> used_;
  std::size_t mask_ = 0;
  std::size_t peak_ = 0;
  std::size_t max_probe_ = 0;
};

}  // namespace sparsedist
