#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace orlicz_ot {

/// Worker cap: ORLICZ_OT_THREADS if set (>= 1), else hardware concurrency
/// clamped to 8. Resolved once per process.
inline unsigned thread_budget() {
  static const unsigned budget = [] {
    if (const char* env = std::getenv("ORLICZ_OT_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : std::min(hw, 8u);
  }();
  return budget;
}

/// Index-parallel loop over [0, count). The body must write results only to
/// its own index, which keeps outputs deterministic regardless of the thread
/// count. Exceptions propagate (first one wins).
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  std::size_t nthreads = std::min<std::size_t>(thread_budget(), count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::mutex err_mx;
  std::exception_ptr first_error;
  for (std::size_t t = 0; t < nthreads; ++t) {
    std::size_t begin = count * t / nthreads;
    std::size_t end = count * (t + 1) / nthreads;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mx);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace orlicz_ot
