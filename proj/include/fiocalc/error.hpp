// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy used inside the core. The C boundary maps each code to a
// status value (see fiocalc.h).

#ifndef FIOCALC_ERROR_HPP
#define FIOCALC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fiocalc {

enum class ErrorCode {
  kUsage = 1,
  kValidation = 2,
  kParse = 3,
  kDomain = 4,
  kConvergence = 5,
  kBranch = 6,
  kQuadrature = 7,
  kConfig = 8,
  kInternal = 9,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Syntax errors carry a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::kParse, what + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ErrorCode::kConvergence, what) {}
};

class BranchError : public Error {
 public:
  explicit BranchError(const std::string& what)
      : Error(ErrorCode::kBranch, what) {}
};

class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& what)
      : Error(ErrorCode::kQuadrature, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

}  // namespace fiocalc

#endif  // FIOCALC_ERROR_HPP
