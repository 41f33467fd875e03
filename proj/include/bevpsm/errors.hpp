// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_ERRORS_HPP
#define BEVPSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bevpsm {

// Error categories. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  kConfig,      // invalid configuration / schema violation
  kInput,       // invalid argument to an operation
  kGeneration,  // profile generation failed (e.g. infeasible trip)
  kIo,          // file system errors
  kParse,       // malformed input file
  kInternal,    // broken invariant inside the library
};

const char* category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what)
      : Error(ErrorCategory::kGeneration, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, long line, const std::string& what)
      : Error(ErrorCategory::kParse, source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCategory::kInternal, what) {}
};

}  // namespace bevpsm

#endif  // BEVPSM_ERRORS_HPP
