#include "sparsedist/hash_accumulator.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "sparsedist/error.hpp"

namespace sparsedist {

HashAccumulator::HashAccumulator(std::size_t capacity) : slots_(capacity) {
  if (capacity == 0) throw Error(Errc::InvalidParam, "hash accumulator capacity must be >= 1");
  if (std::has_single_bit(capacity)) mask_ = capacity - 1;
  used_.reserve(capacity);
}

void HashAccumulator::build(std::span<const col_t> cols, std::span<const double> vals) {
  clear();
  // One slot must stay empty or absent-key probes would never terminate.
  if (cols.size() >= slots_.size()) {
    throw Error(Errc::SizeOverflow, std::to_string(cols.size()) + " entries do not fit a table of capacity " +
                                        std::to_string(slots_.size()));
  }
  for (std::size_t t = 0; t < cols.size(); ++t) {
    std::size_t slot = home(cols[t]);
    std::size_t probes = 1;
    while (slots_[slot].key != kEmpty && slots_[slot].key != cols[t]) {
      slot = next(slot);
      ++probes;
    }
    if (slots_[slot].key == kEmpty) used_.push_back(slot);
    slots_[slot] = {cols[t], vals[t]};
    max_probe_ = std::max(max_probe_, probes);
  }
  peak_ = std::max(peak_, used_.size());
}

void HashAccumulator::clear() noexcept {
  for (std::size_t slot : used_) slots_[slot].key = kEmpty;
  used_.clear();
}

}  // namespace sparsedist
