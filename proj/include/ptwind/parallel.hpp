#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ptwind {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Work is split into
// fixed contiguous blocks, so each index is visited exactly once regardless of
// scheduling; callers write into per-index slots. The first exception (lowest
// index) is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first;
  std::size_t first_index = n;
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < first_index) {
          first_index = i;
          first = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block, hi = std::min(n, lo + block);
    if (lo < hi) pool.emplace_back(run, lo, hi);
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace ptwind
