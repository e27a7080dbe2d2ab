// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "asym/dists.hpp"
#include "asym/state.hpp"

namespace asym::testing {

// Distribution with small-denominator weights on [offset, offset + len);
// the end points are nonzero.
inline RatSeq random_rat_dist(std::mt19937_64& rng, int max_len, Index offset = 0, int max_weight = 6) {
  std::uniform_int_distribution<int> len_d(1, max_len);
  std::uniform_int_distribution<int> wd(0, max_weight);
  std::uniform_int_distribution<int> pos(1, max_weight);
  const int len = len_d(rng);
  std::vector<Rational> v(static_cast<std::size_t>(len));
  Rational total(0);
  for (int i = 0; i < len; ++i) {
    const bool end = i == 0 || i == len - 1;
    v[static_cast<std::size_t>(i)] = end ? pos(rng) : wd(rng);
    total += v[static_cast<std::size_t>(i)];
  }
  for (auto& x : v) x /= total;
  return RatSeq(offset, std::move(v));
}

// Dirichlet-like float distribution with full support on [0, len).
inline F64Seq random_f64_dist(std::mt19937_64& rng, int len) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(static_cast<std::size_t>(len));
  double s = 0.0;
  for (auto& x : v) s += (x = e(rng) + 1e-3);
  for (auto& x : v) x /= s;
  return F64Seq(0, std::move(v));
}

inline std::vector<double> random_phases(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> ph(n);
  for (auto& x : ph) x = u(rng);
  return ph;
}

inline PureState random_state(std::mt19937_64& rng, int max_len, bool phases = true) {
  const RatSeq p = random_rat_dist(rng, max_len);
  return PureState::from_exact_profile(p, phases ? random_phases(rng, p.size()) : std::vector<double>{});
}

}  // namespace asym::testing
