#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace makaro {

/// Runs trials 0..count-1 over `workers` threads in contiguous blocks.
/// `per_trial(t, acc)` folds trial t into a worker-local accumulator; the
/// partial accumulators are merged in block order with `Acc::merge`. When
/// merge is commutative the result does not depend on the worker count.
template <class Acc, class PerTrial>
Acc run_trials(std::uint64_t count, unsigned workers, PerTrial&& per_trial) {
  workers = std::max(1u, workers);
  if (count < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(count, 1));
  std::vector<Acc> partial(workers);
  std::vector<std::exception_ptr> failure(workers);
  auto block = [&](unsigned w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    try {
      for (std::uint64_t t = begin; t < end; ++t) per_trial(t, partial[w]);
    } catch (...) {
      failure[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    block(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(block, w);
    for (auto& th : pool) th.join();
  }
  for (auto& f : failure)
    if (f) std::rethrow_exception(f);
  Acc out = std::move(partial.front());
  for (unsigned w = 1; w < workers; ++w) out.merge(partial[w]);
  return out;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace makaro
