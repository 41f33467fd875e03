// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_TOOLS_CLI_HPP
#define BEVPSM_TOOLS_CLI_HPP

#include <ostream>

#include "bevpsm/errors.hpp"

namespace bevpsm::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,       // unknown flag, missing argument
  kConfig = 3,      // schema violation, unknown override key
  kInput = 4,       // invalid operation input (mismatched horizons, bad sample)
  kGeneration = 5,  // profile generation failed
  kIo = 6,          // missing file, unwritable directory
  kParse = 7,       // malformed CSV / MPS / solution file
  kSolver = 8,      // run did not reach optimality
  kValidation = 9,  // stored solution fails the residual check
};

inline constexpr const char* kConfigDirEnv = "BEVPSM_CONFIG_DIR";

int exit_code_for(ErrorCategory category);

/// Runs one command line. Normal output goes to `out`; diagnostics and the
/// one-line JSON error record go to `err`.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bevpsm::cli

#endif  // BEVPSM_TOOLS_CLI_HPP
