// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace tracelab {

namespace detail {
inline std::atomic<int>& job_count() {
  static std::atomic<int> jobs{1};
  return jobs;
}
}  // namespace detail

inline void set_parallel_jobs(int jobs) {
  detail::job_count().store(std::max(1, jobs));
}

inline int parallel_jobs() { return detail::job_count().load(); }

/// Runs f(i) for i in [0, n). f must only write slot i of its outputs, so the
/// result is identical for any job count; per-index work is seeded by index,
/// never by execution order.
template <class F>
void parallel_for(std::int64_t n, F&& f) {
  const int jobs = static_cast<int>(
      std::min<std::int64_t>(parallel_jobs(), std::max<std::int64_t>(n, 1)));
  if (jobs <= 1) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  const std::int64_t chunk = (n + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::int64_t i = begin; i < end; ++i) f(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tracelab
