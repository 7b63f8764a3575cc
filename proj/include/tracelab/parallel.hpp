#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace tracelab {

// Resolves a --threads request: 0 means "use TRACE_LAB_THREADS, else
// hardware_concurrency".
int resolve_threads(int requested);

// Splits [0,n) into fixed-size chunks and reduces per-chunk results in chunk
// order. Chunk boundaries depend only on (n, chunk), never on the thread
// count, so results are bit-identical at any --threads value.
template <typename R, typename ChunkFn, typename CombineFn>
R chunked_reduce(std::uint64_t n, std::uint64_t chunk, R init, ChunkFn work,
                 CombineFn combine, int threads) {
  if (n == 0) return init;
  if (chunk == 0) chunk = 1;
  const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<R> partial(static_cast<std::size_t>(n_chunks));

  threads = resolve_threads(threads);
  if (threads < 2 || n_chunks < 2) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t lo = c * chunk;
      const std::uint64_t hi = std::min(n, lo + chunk);
      partial[static_cast<std::size_t>(c)] = work(lo, hi);
    }
  } else {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        partial[static_cast<std::size_t>(c)] = work(lo, hi);
      }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_chunks));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  R acc = init;
  for (auto& p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace tracelab
