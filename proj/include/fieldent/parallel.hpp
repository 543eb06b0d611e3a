#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fieldent {

// Runs fn(i) for i in [0, n) on `workers` threads (0 = hardware concurrency).
// Work items are independent and results are written by index, so the worker
// count never changes the numerical output.
template <class Fn>
void parallel_for_index(std::size_t n, unsigned workers, const Fn& fn) {
  if (n == 0) return;
  unsigned w = workers == 0 ? std::thread::hardware_concurrency() : workers;
  if (w == 0) w = 1;
  if (w > n) w = (unsigned)n;
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fieldent
