// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asym/seq.hpp"

namespace asym::cli {

enum ExitCode : int { kOk = 0, kMalformed = 1, kPrecondition = 2, kCertification = 3 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  Backend backend = Backend::rational;
  double tol = 1e-6;
  double eps = 0.05;
  std::string out;  // empty: stdout
  std::uint64_t seed = 1;
  std::optional<Index> window;
  std::optional<Index> trunc;
  std::vector<int> ms;
  std::string dir = "sup";
  std::string family;
  std::string demo;
  int pairs = 300;
};

// Runs one command. Results go to cfg.out (or `out` when empty), diagnostics
// to `err`. Returns one of ExitCode.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it.
int main_with_args(int argc, char** argv, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double x);

}  // namespace asym::cli
