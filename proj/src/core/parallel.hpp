#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace gs {

/// Worker budget: GSTRUCT_THREADS when set (clamped to >= 1), otherwise the
/// hardware count.
inline int thread_budget() {
  if (const char* env = std::getenv("GSTRUCT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs f(i) for i in [0, n) on up to thread_budget() threads, contiguous
/// blocks per worker. Caller owns determinism: f must write only to slot i of
/// preallocated storage. Falls back to a plain loop when one worker suffices.
template <class F>
void parallel_for(int n, F&& f) {
  const int budget = thread_budget();
  if (n <= 1 || budget <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  const int workers = std::min(budget, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gs
