// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "asym/dists.hpp"

namespace asym {

struct Amplitude {
  double modulus = 0.0;
  double phase = 0.0;  // [0, 2pi)

  bool operator==(const Amplitude&) const = default;
};

// Pure state on the truncated ladder H = sum_n n |n><n|, n in [0, n_trunc).
//
// A state may remember how its profile was built: exact_profile is the exact
// rational energy distribution (complete), factor certifies that the
// untruncated profile is mixing * P_rate. Both are used only by the rational
// backend and by certificates; amplitudes are always authoritative for
// numerics.
class PureState {
 public:
  PureState() = default;

  static PureState from_polar(std::vector<Amplitude> amps, const Tolerance& tol = {});
  static PureState from_amplitudes(const std::vector<std::complex<double>>& amps,
                                   const Tolerance& tol = {});
  // Amplitudes sqrt(p(n)) with the given phases (zero when absent). p must
  // live on [0, n_trunc).
  static PureState from_profile(const F64Seq& p, const std::vector<double>& phases = {},
                                const Tolerance& tol = {});
  static PureState from_exact_profile(const RatSeq& p, const std::vector<double>& phases = {});

  Index n_trunc() const { return static_cast<Index>(amps_.size()); }
  const std::vector<Amplitude>& amps() const { return amps_; }
  std::complex<double> amplitude(Index n) const;
  std::vector<std::complex<double>> vector() const;

  const std::optional<RatSeq>& exact_profile() const { return exact_profile_; }
  const std::optional<PoissonFactor>& factor() const { return factor_; }
  PureState with_factor(PoissonFactor f) const;
  PureState with_exact_profile(RatSeq p) const;

  // All phases zero.
  bool canonical() const;

  template <class T>
  Distribution<T> energy_distribution(const Tolerance& tol = {}) const;

  bool operator==(const PureState&) const = default;

 private:
  std::vector<Amplitude> amps_;
  std::optional<RatSeq> exact_profile_;
  std::optional<PoissonFactor> factor_;
};

// Exact profile of the truncated state itself, ignoring any Poisson tag: the
// stored exact profile, or the squared moduli normalized exactly.
RatSeq truncated_profile(const PureState& psi);

PureState eigenstate(Index n);
// (|0> + |1>) / sqrt 2
PureState coherence_bit();

// chi_rate: amplitudes sqrt(P_rate(n)), zero phases, tagged with its Poisson
// factor. n_trunc <= 0 picks default_poisson_trunc.
PureState poisson_profile_state(const Rational& rate, Index n_trunc = 0);

// Pure state whose profile is mixing * P_rate (mixing >= 0 on nonnegative
// indices), truncated to n_trunc levels and tagged.
PureState poisson_mixture_state(const Rational& rate, const RatSeq& mixing, Index n_trunc = 0);

// Profile of the untruncated mixing * P_rate evaluated on [0, n_trunc).
template <class T>
Distribution<T> poisson_mixture_distribution(const PoissonFactor& f, Index n_trunc);

}  // namespace asym
