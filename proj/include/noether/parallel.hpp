#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace noether {

/// Worker count: NOETHER_THREADS if set (>= 1), else the hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("NOETHER_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(chunk, begin, end) over a fixed partition of [0, n) into `chunks` pieces.
/// The partition does not depend on the thread count, so callers that reduce
/// per-chunk results in chunk order get bit-identical output for any budget.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunks, Body&& body) {
  chunks = std::max<std::size_t>(1, std::min(chunks, n == 0 ? 1 : n));
  auto range = [&](std::size_t c) {
    std::size_t b = n * c / chunks;
    std::size_t e = n * (c + 1) / chunks;
    body(c, b, e);
  };
  unsigned workers = std::min<unsigned>(thread_budget(), static_cast<unsigned>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) range(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) range(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace noether
