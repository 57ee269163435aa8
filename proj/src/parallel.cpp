#include "blockfit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace blockfit {

namespace {
int g_threads = 1;
constexpr Index kChunk = 2048;  // rows per task; fixed so the grid is stable
}  // namespace

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

Index parallel_chunk_count(Index n) { return n <= 0 ? 0 : (n + kChunk - 1) / kChunk; }

void parallel_for(Index n, const std::function<void(Index, Index, Index)>& fn) {
  if (n <= 0) return;
  const Index chunks = parallel_chunk_count(n);
  if (g_threads == 1 || chunks == 1) {
    for (Index c = 0; c < chunks; ++c) {
      fn(c * kChunk, std::min(n, (c + 1) * kChunk), c);
    }
    return;
  }
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (;;) {
      const Index c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      fn(c * kChunk, std::min(n, (c + 1) * kChunk), c);
    }
  };
  const int nw = static_cast<int>(std::min<Index>(g_threads, chunks));
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (int t = 1; t < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

void parallel_for_tasks(Index n, const std::function<void(Index)>& fn) {
  if (n <= 0) return;
  if (g_threads == 1 || n == 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (;;) {
      const Index i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      fn(i);
    }
  };
  const int nw = static_cast<int>(std::min<Index>(g_threads, n));
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (int t = 1; t < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace blockfit
