// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_VERSION_HPP
#define BEVPSM_VERSION_HPP

#include "bevpsm/config.hpp"

namespace bevpsm {

const char* version();

/// Library, compiler and dependency versions for run manifests.
Json build_info();

}  // namespace bevpsm

#endif  // BEVPSM_VERSION_HPP
