// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace asym {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("to_rational: non-finite value");
  return Rational(x);
}

Rational simplest_rational(double x, double tol, long max_den) {
  const Rational exact = to_rational(x);
  // Convergents h/k of the exact value: h_n = a_n h_{n-1} + h_{n-2}.
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Rational rest = exact;
  for (int i = 0; i < 64; ++i) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    const mpz_class h = a * h1 + h0, k = a * k1 + k0;
    if (k > max_den) break;
    const Rational c(h, k);
    if (std::fabs(Rational(c - exact).get_d()) <= tol) return Rational(c);
    rest -= a;
    if (rest == 0) break;
    rest = 1 / rest;
    h0 = h1;
    h1 = h;
    k0 = k1;
    k1 = k;
  }
  return exact;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s) {
    if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
      throw std::invalid_argument("malformed rational literal '" + s + "'");
  }
  if (s.front() == '+') s.erase(s.begin());
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& x) { return x.get_str(10); }

}  // namespace asym
