#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace holorigid {

// Worker cap: HOLORIGID_THREADS (clamped to [1, hardware]) or the hardware
// concurrency when unset. All parallel loops use static contiguous block
// partitions with disjoint writes and sequential merges, so results are
// byte-identical for every thread count.
inline int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("HOLORIGID_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n < hw ? n : hw;
  }
  return hw;
}

// Runs fn(begin, end) over a static partition of [0, n). fn must only write
// to slots it owns.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  std::size_t workers = static_cast<std::size_t>(thread_count());
  if (workers > n) workers = n ? n : 1;
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace holorigid
