#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sparsedist {

/// Runs fn(worker, item) for every item in [0, n_items) on `workers`
/// threads pulling items from a shared counter. Which worker runs an item is
/// unspecified, so fn must only touch per-worker state and per-item outputs.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n_items, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || n_items <= 1) {
    for (std::size_t t = 0; t < n_items; ++t) fn(std::size_t{0}, t);
    return;
  }
  if (workers > n_items) workers = n_items;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&](std::size_t worker) {
    try {
      for (std::size_t t = next.fetch_add(1, std::memory_order_relaxed); t < n_items;
           t = next.fetch_add(1, std::memory_order_relaxed)) {
        fn(worker, t);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n_items, std::memory_order_relaxed);
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body, w);
    body(0);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sparsedist
