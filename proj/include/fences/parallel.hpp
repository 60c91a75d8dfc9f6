#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace fences {

/// Applies fn to every input on a bounded pool of worker threads and returns
/// the results in input order. The first exception thrown by any task is
/// rethrown after all workers stop.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, unsigned workers, Fn fn) {
  using Out = std::invoke_result_t<Fn&, const In&>;
  std::vector<std::optional<Out>> slots(inputs.size());
  workers = std::clamp(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(inputs.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size() && !failed; i = next++) {
      try {
        slots[i].emplace(fn(inputs[i]));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<Out> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

/// std::thread::hardware_concurrency with a floor of one.
inline unsigned default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

}  // namespace fences
