//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace leakaudit {

/// Resolves a user thread count: values < 1 mean "use the hardware".
inline int resolve_threads(int threads) {
  if (threads >= 1)
    return threads;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

/// Runs fn(shard, begin, end) over `shards` contiguous slices of [0, n).
/// Shard boundaries depend only on n and the shard count, so callers that
/// merge per-shard output in shard order get schedule-independent results.
/// The first exception thrown by any shard is rethrown.
template <typename Fn>
void parallel_shards(std::size_t n, int threads, Fn &&fn) {
  const auto shards = static_cast<std::size_t>(
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   n, static_cast<std::size_t>(resolve_threads(threads)))));
  if (shards <= 1) {
    fn(std::size_t {0}, std::size_t {0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = n * s / shards;
    const std::size_t end = n * (s + 1) / shards;
    workers.emplace_back([&, s, begin, end] {
      try {
        fn(s, begin, end);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
      }
    });
  }
  for (auto &w: workers)
    w.join();
  if (error)
    std::rethrow_exception(error);
}

/// Number of shards parallel_shards will use for n items.
inline std::size_t shard_count(std::size_t n, int threads) {
  return std::max<std::size_t>(
      1, std::min<std::size_t>(n, static_cast<std::size_t>(resolve_threads(threads))));
}

}  // namespace leakaudit
