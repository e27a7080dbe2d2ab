// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asym/density.hpp"
#include "asym/qfi.hpp"

namespace asym {

// Squared Schmidt coefficients, sorted nonincreasing, unit sum.
struct SchmidtVector {
  std::vector<double> probs;

  // Sorts, checks nonnegativity (within neg_tol) and unit mass.
  static SchmidtVector make(std::vector<double> p, const Tolerance& tol = {});
};

// Prefix sums of p dominate those of q (zero padding to the longer length,
// slack 1e-12).
bool majorizes(const SchmidtVector& p, const SchmidtVector& q);

// Existence of a doubly stochastic D with q = D p, decided by exact linear
// programming (length <= 8). Double entries are snapped to the simplest
// rational within 1e-12 (denominator <= 1e6), so vectors computed from small
// rationals keep their tight prefix sums.
bool majorizes_hlp(const SchmidtVector& p, const SchmidtVector& q);
bool majorizes_hlp(const std::vector<Rational>& p, const std::vector<Rational>& q);

// psi -> phi by LOCC iff lambda_psi is majorized by lambda_phi.
bool nielsen_convertible(const SchmidtVector& psi, const SchmidtVector& phi);

// Eigenvalue list with multiplicities, for spectra too large to expand.
struct Spectrum {
  struct Level {
    double value = 0.0;
    double multiplicity = 1.0;
  };
  std::vector<Level> levels;  // sorted by value, descending

  static Spectrum of(const DensityMatrix& rho);
  static Spectrum of(const std::vector<double>& eigenvalues);
  // Spectrum of rho^{(x) m} for a diagonal rho given by its eigenvalues.
  static Spectrum iid_power(const std::vector<double>& eigenvalues, int m);
  double mass() const;
};

// Base-2 entropies; eigenvalues <= 1e-12 count as zero.
struct Entropies {
  double s = 0.0;      // von Neumann
  double s_max = 0.0;  // log rank
  double s_min = 0.0;  // -log largest eigenvalue
};

Entropies entropies(const Spectrum& sp);
Entropies entropies(const DensityMatrix& rho);

// Smoothing over states diagonal in the eigenbasis of rho within trace
// distance eps. s_max_upper: tail cut (drop the smallest eigenvalues with
// total mass <= eps, renormalize). s_min_lower: peak flatten (cap the
// largest eigenvalues at t, move the removed mass <= eps onto the others
// without exceeding t).
struct SmoothEntropies {
  double eps = 0.0;
  double s_max_upper = 0.0;
  BoundKind s_max_kind = BoundKind::upper_bound;
  double s_min_lower = 0.0;
  BoundKind s_min_kind = BoundKind::lower_bound;
};

SmoothEntropies smooth_entropies(const Spectrum& sp, double eps);
SmoothEntropies smooth_entropies(const DensityMatrix& rho, double eps);

struct EntropyRatePoint {
  int m = 0;
  double s_max_rate = 0.0;  // S_max^eps / m
  double s_min_rate = 0.0;  // S_min^eps / m
};

std::vector<EntropyRatePoint> iid_smooth_entropy_rates(const std::vector<double>& eigenvalues,
                                                       const std::vector<int>& ms, double eps);

// One row of the side-by-side comparison of the two resource theories: the
// same probability vectors read as energy distributions (RTA) and as
// squared Schmidt coefficients (entanglement).
struct CorrespondenceRow {
  int id = 0;
  RatSeq p;
  RatSeq q;
  bool rta_convertible = false;  // one_shot_convertible through p * q~
  bool rta_predicate = false;    // shift-mixture feasibility by LP
  bool ent_convertible = false;  // nielsen_convertible
  bool ent_predicate = false;    // doubly stochastic feasibility by LP
};

// Seeded pairs of distributions on at most max_levels levels; a quarter of
// the pairs are built as convertible (q = w * p for RTA rows).
std::vector<CorrespondenceRow> correspondence_demo(int pairs, std::uint64_t seed, int max_levels = 4);

}  // namespace asym
