// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/lp.hpp"

#include <stdexcept>

namespace asym {

std::optional<std::vector<Rational>> find_feasible_point(const std::vector<std::vector<Rational>>& a,
                                                         const std::vector<Rational>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw std::invalid_argument("find_feasible_point: shape mismatch");
  const std::size_t n = m == 0 ? 0 : a.front().size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("find_feasible_point: ragged matrix");
  if (m == 0) return std::vector<Rational>(n, Rational(0));

  // Columns: x_0..x_{n-1}, artificials a_0..a_{m-1}, rhs.
  const std::size_t cols = n + m + 1;
  const std::size_t rhs = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = sgn(b[i]) < 0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
    t[i][n + i] = 1;
    t[i][rhs] = flip ? Rational(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // Reduced costs of min sum(artificials); the last entry is -objective.
  std::vector<Rational> d(cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) d[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) d[rhs] -= t[i][rhs];

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < rhs; ++j)
      if (sgn(d[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw std::logic_error("find_feasible_point: unbounded phase-one problem");
    const Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    if (sgn(d[enter]) != 0) {
      const Rational f = d[enter];
      for (std::size_t j = 0; j < cols; ++j) d[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  if (sgn(d[rhs]) != 0) return std::nullopt;
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = t[i][rhs];
  return x;
}

}  // namespace asym
