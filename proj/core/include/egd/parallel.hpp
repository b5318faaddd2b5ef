//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_PARALLEL_HPP
#define EGD_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace egd {

/// Worker count: EGD_THREADS env var caps parallelism, 0 or unset = auto.
inline int resolve_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char *env = std::getenv("EGD_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return hw;
}

/// Static-partition parallel loop. Each index is processed exactly once and
/// results must be written by index, so the outcome is independent of the
/// worker count.
inline void parallel_for(int count, const std::function<void(int)> &fn) {
  const int workers = std::min(resolve_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto &t : pool) t.join();
}

}  // namespace egd

#endif  // EGD_PARALLEL_HPP
