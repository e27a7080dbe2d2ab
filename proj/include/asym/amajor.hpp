// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "asym/dists.hpp"

namespace asym {

// Outcome of testing p >_a q through w = p * q~.
//
// holds is the verdict; certified means it is proven for the untruncated
// distributions (either both are complete, or a Poisson factorisation
// decides it, or a genuinely negative entry was found). An uncertified
// verdict is the window-limited one. The witness is w on the window, with
// probabilities exp(witness_log_scale) * witness(k).
template <class T>
struct AMajorVerdict {
  bool holds = false;
  bool certified = false;
  // Every entry of w on the window is nonnegative (within tolerance).
  bool window_holds = false;
  bool marginal = false;
  std::optional<Seq<T>> witness;
  double witness_log_scale = 0.0;
  double min_violation = 0.0;
  Index window_lo = 0;
  Index window_hi = 0;
  // Set when the witness is the whole (finite) shift distribution.
  bool witness_complete = false;
  std::string certificate;
};

struct AMajorOptions {
  // Indices checked beyond max supp(p) - n*(q) when the decision is windowed.
  Index extension = 64;
  Tolerance tol{};
};

template <class T>
AMajorVerdict<T> a_majorizes(const Distribution<T>& p, const Distribution<T>& q, const AMajorOptions& opts = {});

// Direct feasibility of p = sum_k w(k) shift(q, k), w >= 0, sum w = 1 over
// k in [min p - max q, max p - min q], decided by exact linear programming.
// Complete distributions with at most 16 support levels each. The feasible
// point found is returned as the witness.
template <class T>
std::optional<RatSeq> a_majorizes_bruteforce(const Distribution<T>& p, const Distribution<T>& q);

// Verdict implied by analytic structure alone (point masses, Poisson factor
// tags, finite against infinite support), with its reason; nullopt when a
// windowed computation is needed. Never contradicts a_majorizes.
template <class T>
std::optional<std::pair<bool, std::string>> structural_verdict(const Distribution<T>& p, const Distribution<T>& q);

// k with p = shift(q, k) when p >_a q and q >_a p, else nullopt.
template <class T>
std::optional<Index> mutual_implies_shift(const Distribution<T>& p, const Distribution<T>& q,
                                          const AMajorOptions& opts = {});

}  // namespace asym
