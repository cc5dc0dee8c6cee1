// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// The ten acceptance criteria as runnable checks.

#ifndef FIOCALC_ACCEPTANCE_HPP
#define FIOCALC_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace fiocalc::acceptance {

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // measured values against their limits
  double seconds = 0.0;
};

inline constexpr int kCount = 10;

// Runs one criterion; errors from the modules are reported as failures.
Result run(int id);

std::vector<Result> run_all(const std::vector<int>& ids = {});

}  // namespace fiocalc::acceptance

#endif  // FIOCALC_ACCEPTANCE_HPP
