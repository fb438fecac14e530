#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace spinor {

/// Deterministic fan-out over [0, n): fixed contiguous stripes per worker,
/// results written by index, so output ordering never depends on scheduling.
template <typename F>
void parallel_for(std::int64_t n, F&& fn, unsigned max_threads = 0) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (max_threads != 0 && max_threads < hw) hw = max_threads;
  const std::int64_t workers = std::min<std::int64_t>(hw, n);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t lo = w * n / workers;
    const std::int64_t hi = (w + 1) * n / workers;
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace spinor
