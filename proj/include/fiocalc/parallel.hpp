// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FIOCALC_PARALLEL_HPP
#define FIOCALC_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fiocalc {

// Worker count for internal loops. 0 means "not set": FIOCALC_THREADS, then 1.
int thread_count();
void set_thread_count(int n);

// True on threads started by parallel_for; nested calls then run serially.
inline bool& in_parallel_worker() {
  thread_local bool flag = false;
  return flag;
}

// Runs f(i) for i in [0, n). Work is split into contiguous blocks; callers
// write results by index so the outcome does not depend on the thread count.
template <class F>
void parallel_for(int n, F&& f) {
  const int nt = in_parallel_worker() ? 1 : std::min(thread_count(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt));
  for (int w = 0; w < nt; ++w) {
    const int b = static_cast<int>(static_cast<long long>(n) * w / nt);
    const int e = static_cast<int>(static_cast<long long>(n) * (w + 1) / nt);
    pool.emplace_back([&, b, e] {
      in_parallel_worker() = true;
      try {
        for (int i = b; i < e; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace fiocalc

#endif  // FIOCALC_PARALLEL_HPP
