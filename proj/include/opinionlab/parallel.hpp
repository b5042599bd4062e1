#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace opinionlab {

/// Worker cap: OPINIONLAB_THREADS if set, else hardware concurrency (min 1).
inline int max_threads() {
  if (const char* env = std::getenv("OPINIONLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(chunk_index, begin, end) over [0, count) split into fixed chunks.
/// Chunk boundaries depend only on count, never on thread timing, so any
/// per-chunk accumulation combined in chunk order is deterministic.
inline void parallel_chunks(long count,
                            const std::function<void(int, long, long)>& body) {
  const int threads = static_cast<int>(std::max<long>(1, std::min<long>(max_threads(), count)));
  if (threads == 1) {
    body(0, 0, count);
    return;
  }
  const long per = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int c = 0; c < threads; ++c) {
    const long lo = c * per;
    const long hi = std::min(count, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([&body, c, lo, hi] { body(c, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace opinionlab
