// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/error.hpp"

namespace fiocalc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return "usage";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kConvergence:
      return "convergence";
    case ErrorCode::kBranch:
      return "branch";
    case ErrorCode::kQuadrature:
      return "quadrature";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "unknown";
}

}  // namespace fiocalc
