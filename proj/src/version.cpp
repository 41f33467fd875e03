// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/version.hpp"

#include <Eigen/Core>
#include <string>

namespace bevpsm {

const char* version() { return BEVPSM_VERSION; }

Json build_info() {
  return Json{{"bevpsm", BEVPSM_VERSION},
              {"compiler", __VERSION__},
              {"cxx_standard", static_cast<long>(__cplusplus)},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace bevpsm
