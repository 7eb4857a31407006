#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nclift {

/// Worker count from NCLIFT_THREADS, clamped to [1, hardware]. Absent or
/// unparsable means sequential.
inline std::size_t thread_budget() {
  const char* env = std::getenv("NCLIFT_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v <= 1) return 1;
  const std::size_t hw = std::thread::hardware_concurrency();
  return std::min<std::size_t>(static_cast<std::size_t>(v), hw == 0 ? 1 : hw);
}

/// Runs fn(i) for i in [0, n). Each index owns its output slot, so results are
/// bit-identical to the sequential order regardless of the thread count.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
  const std::size_t workers = std::min(thread_budget(), n == 0 ? std::size_t{1} : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace nclift
