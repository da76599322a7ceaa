#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace roughfilm {

// Evaluates fn(i) for i in [0, n) into slots[i], fanning out over at most
// `threads` workers. Slots are assigned by index, never by worker, so a
// reduction over slots in index order is bit-identical for every thread count.
template <class T, class Fn>
void map_slots(std::vector<T>& slots, int n, int threads, Fn&& fn) {
  slots.resize(static_cast<size_t>(std::max(n, 0)));
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) slots[static_cast<size_t>(i)] = fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&slots, &next, n, &fn] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      slots[static_cast<size_t>(i)] = fn(i);
    }
  };
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace roughfilm
