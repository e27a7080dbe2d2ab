// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return asym::cli::main_with_args(argc, argv, std::cout, std::cerr); }
