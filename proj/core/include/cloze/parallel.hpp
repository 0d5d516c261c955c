#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cloze {

/// Runs fn(i) for i in [0, n) across at most `jobs` threads with a static
/// chunk partition. Callers store results by index, so the outcome is
/// independent of scheduling.
inline void parallel_for(size_t n, size_t jobs,
                         const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  jobs = std::min(jobs, n);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  const size_t chunk = (n + jobs - 1) / jobs;
  for (size_t w = 0; w < jobs; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(begin + chunk, n);
    if (begin >= end) break;
    threads.emplace_back([begin, end, &fn]() {
      for (size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace cloze
