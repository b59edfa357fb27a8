#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace cirlan {

inline unsigned effective_threads(unsigned requested = 0) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs f(i) for i in [0, n). Work is split into contiguous index ranges, so
// results written to per-index slots are identical for any thread count.
// Reductions must happen afterwards, in index order, on the filled slots.
template <class F>
void parallel_for(std::int64_t n, const F& f, unsigned threads = 0) {
  if (n <= 0) return;
  const unsigned workers = std::min<std::uint64_t>(effective_threads(threads),
                                                   static_cast<std::uint64_t>(n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
    if (lo >= hi) break;
    pool.emplace_back([&f, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cirlan
