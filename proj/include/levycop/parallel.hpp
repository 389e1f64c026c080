#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "levycop/rng.hpp"

namespace levycop {

/// Runs task(i) for i in [0, n_tasks) on up to worker_threads() threads.
/// Tasks must write only to state owned by their index. The first exception
/// thrown by any task is rethrown after all workers stop.
template <class Task>
void parallel_for(std::size_t n_tasks, Task&& task) {
  const std::size_t n_workers =
      std::min<std::size_t>(worker_threads(), std::max<std::size_t>(n_tasks, 1));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_workers - 1);
  for (std::size_t w = 0; w + 1 < n_workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace levycop
