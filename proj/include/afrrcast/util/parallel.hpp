#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace afrrcast {

/// Runs fn(i) for i in [0, n) across `workers` threads. Each index writes
/// only its own outputs, so results do not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([t, n, nthreads, &fn] {
      for (std::size_t i = t; i < n; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace afrrcast
