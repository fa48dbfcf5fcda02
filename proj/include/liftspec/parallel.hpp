#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace liftspec {

// Worker count: LIFTSPEC_THREADS when set and positive, else the hardware
// concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("LIFTSPEC_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(0..count-1) on up to `threads` workers. Results must be written
// to per-index slots by the task; the first exception is rethrown.
inline void parallel_for(int count, int threads, const std::function<void(int)>& task) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int k = next++; k < count && !failed; k = next++) {
        try {
          task(k);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace liftspec
