// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return bevpsm::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
