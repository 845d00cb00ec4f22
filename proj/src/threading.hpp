#pragma once
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bil {

// Global worker count: set via the C API / CLI (--threads), falls back to
// BILLIARD_THREADS, then hardware concurrency.
inline int& thread_count_ref() {
  static int n = [] {
    if (const char* env = std::getenv("BILLIARD_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    int hc = static_cast<int>(std::thread::hardware_concurrency());
    return hc > 0 ? hc : 1;
  }();
  return n;
}

inline void set_thread_count(int n) {
  if (n > 0) thread_count_ref() = n;
}

// Simple static-chunk parallel for over [0, n). Exceptions in workers are
// rethrown on the calling thread (first one wins).
inline void parallel_for(int n, const std::function<void(int)>& body) {
  int workers = std::min(thread_count_ref(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(n);
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace bil
