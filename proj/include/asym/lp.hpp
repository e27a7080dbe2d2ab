// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "asym/rational.hpp"

namespace asym {

// Exact feasibility of { x >= 0 : A x = b } by a phase-one simplex with
// Bland's rule. Returns a basic feasible point or nullopt. A is row-major,
// every row has the same length.
std::optional<std::vector<Rational>> find_feasible_point(const std::vector<std::vector<Rational>>& a,
                                                         const std::vector<Rational>& b);

}  // namespace asym
