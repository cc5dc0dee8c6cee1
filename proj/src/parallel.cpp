// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace fiocalc {

namespace {
std::atomic<int> g_threads{0};
}  // namespace

int thread_count() {
  const int n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("FIOCALC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

}  // namespace fiocalc
