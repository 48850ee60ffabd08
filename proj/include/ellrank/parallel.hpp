#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ellrank {

// Applies fn to every input on a pool of `workers` threads. Results are
// stored by input position, so the output never depends on scheduling.
// The first exception thrown by any task is rethrown after the pool joins.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, std::size_t workers, Fn fn) {
  using Out = decltype(fn(inputs.front()));
  std::vector<Out> results(inputs.size());
  workers = std::max<std::size_t>(1, std::min(workers, inputs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) results[i] = fn(inputs[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      try {
        results[i] = fn(inputs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(inputs.size());
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace ellrank
