#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anoneval {

/// Number of worker threads used by the sweep kernels (at least 1).
inline std::size_t worker_count() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls fn(task) for every task in [0, tasks), spreading tasks over the
/// worker pool. Which thread runs which task is unspecified, so callers that
/// need reproducible floating-point results give each task its own
/// accumulator and reduce them afterwards in task order.
template <class Fn>
void parallel_tasks(std::size_t tasks, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < tasks; t = next++) {
        try {
          fn(t);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Splits [0, n) into a fixed number of contiguous blocks that depends only
/// on n, so per-block partial sums reduce identically on any machine.
struct BlockPartition {
  static constexpr std::size_t kTargetBlocks = 64;

  explicit BlockPartition(std::size_t n)
      : n(n), blocks(std::max<std::size_t>(1, std::min(n, kTargetBlocks))) {}

  std::size_t begin(std::size_t b) const { return n * b / blocks; }
  std::size_t end(std::size_t b) const { return n * (b + 1) / blocks; }

  std::size_t n;
  std::size_t blocks;
};

}  // namespace anoneval
