// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace asym {

using Rational = mpq_class;

// Exact value of a finite double (every finite double is a dyadic rational).
Rational to_rational(double x);

// First continued-fraction convergent of x within tol whose denominator is at
// most max_den; the exact value when there is none.
Rational simplest_rational(double x, double tol, long max_den);

// Accepts "p/q", "p" and "-p/q"; result is canonical.
Rational parse_rational(std::string_view text);

// Canonical "p/q" text ("p" when the denominator is 1).
std::string format_rational(const Rational& x);

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

}  // namespace asym
