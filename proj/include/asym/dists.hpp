// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "asym/seq.hpp"

namespace asym {

// Certificate that the untruncated distribution equals mixing * P_rate, with
// mixing a finite probability distribution (exact rationals).
struct PoissonFactor {
  Rational rate;
  RatSeq mixing;

  bool is_shifted_poisson() const { return mixing.size() == 1; }
  bool operator==(const PoissonFactor&) const = default;
};

// Probability distribution over integer energy levels.
//
// Probability at n is exp(log_scale) * seq(n). log_scale is nonzero only for
// exact Poisson kernels on the rational backend, where e^{-rate} is not
// rational. A distribution is either complete (seq is the whole distribution)
// or a prefix of an infinite one: then seq is exact up to index exact_until
// and tail_mass bounds the probability that seq does not represent.
template <class T>
struct Distribution {
  Seq<T> seq;
  double log_scale = 0.0;
  double tail_mass = 0.0;
  std::optional<Index> exact_until;
  std::optional<PoissonFactor> factor;

  bool complete() const { return !exact_until.has_value(); }
  // Largest index at which seq is known to equal the true distribution.
  Index valid_hi() const { return exact_until ? *exact_until : seq.hi(); }

  // Probabilities as doubles (scale applied).
  F64Seq probabilities() const;

  // Finite support, nonnegative entries (clamped within neg_tol), unit mass
  // within mass_tol (exactly 1 on the rational backend).
  static Distribution make_complete(Seq<T> seq, const Tolerance& tol = {});
};

using RatDist = Distribution<Rational>;
using F64Dist = Distribution<double>;

// Truncation that leaves Poisson tail mass far below 1e-12.
Index default_poisson_trunc(double rate);

// e^{-rate} rate^n / n! for 0 <= n < n_trunc. Any real rate; negative rates
// give sign-alternating entries, which is why this is a plain sequence.
F64Seq poisson(double rate, Index n_trunc);

// rate^n / n! for 0 <= n < n_trunc, exactly.
RatSeq poisson_kernel(const Rational& rate, Index n_trunc);

// Probability that P_rate puts on [n_trunc, inf); rate >= 0.
double poisson_tail(double rate, Index n_trunc);

// Poisson P_rate (rate >= 0) as a tagged prefix distribution. On the rational
// backend the body is poisson_kernel and log_scale = -rate.
template <class T>
Distribution<T> poisson_distribution(const Rational& rate, Index n_trunc = 0);

// TP_{mu,sigma2} = shift(P_{sigma2 + gamma}, s), s = floor(mu - sigma2),
// gamma = mu - sigma2 - s.
F64Dist translated_poisson(double mu, double sigma2, Index n_trunc = 0);

// m-fold self convolution. Prefix inputs stay prefixes with a propagated
// exactness bound and tail mass.
template <class T>
Distribution<T> iid_power(const Distribution<T>& p, int m);

struct SpectrumLevel {
  double energy;
  double weight;
};

struct GeneralSpectrum {
  double period = 0.0;
  std::vector<SpectrumLevel> levels;
};

// Maps a finite-period spectrum onto the integer ladder: lowest occupied
// level goes to 0, energies are rescaled by period / 2pi and equal levels are
// merged. Throws when a gap is not an integer multiple of 2pi / period within
// mass_tol.
F64Dist reduce_spectrum(const GeneralSpectrum& g, const Tolerance& tol = {});

struct BarbourParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// c / sqrt(m b - 1/2) + 2 / (m a). Requires m b > 1/2.
double barbour_bound(const BarbourParams& params, int m);

// Per-factor quantities for an integer-valued Z with pmf p.
struct BarbourTerms {
  double mean = 0.0;
  double variance = 0.0;
  double v = 0.0;    // min{1/2, 1 - d_TV(L(Z), L(Z+1))}
  double psi = 0.0;  // sigma^2 E[Z(Z-1)] + |mu - sigma^2| E[(Z-1)(Z-2)] + E|Z(Z-1)(Z-2)|
};

BarbourTerms barbour_terms(const F64Seq& pmf);

// Tightest uniform parameters for i.i.d. copies of pmf: a = sigma^2, b = v,
// c = psi / sigma^2. Throws on zero variance.
BarbourParams barbour_params_iid(const F64Seq& pmf);

// min{x, sqrt(2/e) (sqrt(sigma2 + x) - sqrt(sigma2))}, x = |sigma2 - sigma2p|;
// sigma is the smaller of the two standard deviations.
double poisson_comparison_bound(double sigma2, double sigma2p);

}  // namespace asym
