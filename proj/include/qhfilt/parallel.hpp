#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qhfilt {

/// Runs fn(begin, end) on contiguous stripes of [0, n) across hardware
/// threads. Stripe boundaries depend only on n and the thread count, and
/// workers write to disjoint slots chosen by index, so results are
/// bit-identical regardless of scheduling.
inline void parallelFor(std::size_t n,
                        const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t hw = std::thread::hardware_concurrency();
  std::size_t workers = std::clamp<std::size_t>(hw, 1, n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t b = w * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

}  // namespace qhfilt
