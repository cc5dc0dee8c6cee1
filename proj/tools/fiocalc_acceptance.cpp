// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Prints one line per acceptance criterion. Arguments select criteria by
// number; with none, all ten run. Exit status 0 when every selected one passes.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "fiocalc/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  bool all = true;
  for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : ids) {
    const auto r = fiocalc::acceptance::run(id);
    std::printf("[%s] %2d %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
    all &= r.pass;
  }
  return all ? 0 : 1;
}
