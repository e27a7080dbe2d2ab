// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "asym/amajor.hpp"
#include "asym/density.hpp"

namespace asym {

// exact: lower and upper are certified and within the requested tolerance.
// upper_bound / lower_bound: only that side of value is certified.
// estimate: window-limited number with no certified direction.
enum class BoundKind { exact, upper_bound, lower_bound, estimate };

const char* bound_kind_name(BoundKind k);

// A Fisher-information quantity in units of F (= 4 lambda).
// lower <= true value <= upper are certified; upper may be +inf.
struct QfiBracket {
  double value = 0.0;
  BoundKind kind = BoundKind::estimate;
  double lambda_star = 0.0;  // value / 4
  int iterations = 0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  Index window_lo = 0;
  Index window_hi = 0;
  // Edge found by the window-limited bisection (F units); NaN if none.
  double window_value = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct FisherOptions {
  Backend backend = Backend::rational;
  // Bracket width target in F units.
  double tol = 1e-6;
  Index extension = 64;
  Tolerance tolerance{};
};

double qfi_pure(const PureState& psi, const Tolerance& tol = {});

// 2 sum_{ij} (l_i - l_j)^2 / (l_i + l_j) |<i|H|j>|^2 over eigenpairs with
// l_i + l_j > 1e-12. dim <= 64.
double qfi_mixed(const DensityMatrix& rho);

// inf{4 lambda : P_lambda * p~ >= 0} by bisection on lambda.
template <class T>
QfiBracket f_max_of(const Distribution<T>& p, const FisherOptions& opts);
// sup{4 lambda : p * P_{-lambda} >= 0} by bisection on lambda.
template <class T>
QfiBracket f_min_of(const Distribution<T>& p, const FisherOptions& opts);

QfiBracket f_max_pure(const PureState& psi, const FisherOptions& opts = {});
QfiBracket f_min_pure(const PureState& psi, const FisherOptions& opts = {});

// Purification of a mixed state: amps(s, a) on system level s (energy s) and
// ancilla index a (energy anc_energies[a]). When factor is set, the total
// energy profile is certified to be the tagged distribution.
struct Purification {
  Eigen::MatrixXcd amps;
  std::vector<Index> anc_energies;
  std::optional<PoissonFactor> factor;
};

// Total-energy distribution of a purification (shifted so that it starts
// at the smallest occupied total energy when the ancilla energies are
// negative).
F64Seq total_energy_profile(const Purification& phi);

// Tr_anc |Phi><Phi|.
Eigen::MatrixXcd reduced_state(const Purification& phi);

struct MixedSearchOptions {
  int anc_levels = 4;
  int restarts = 8;
  std::uint64_t seed = 1;
  FisherOptions fisher{Backend::f64, 1e-4, 64, {}};
  // Extra candidates, used only if they purify rho within 1e-9.
  std::vector<Purification> seeds;
};

// Minimum F_max over searched purifications of rho (dim <= 16, anc_levels
// <= 8): eigenbasis purifications with Haar-random ancilla rotations and
// coordinate descent on the ancilla energies, plus the caller's seeds.
QfiBracket f_max_mixed_upper(const DensityMatrix& rho, const MixedSearchOptions& opts = {});

template <class T>
AMajorVerdict<T> one_shot_convertible(const PureState& psi, const PureState& phi, const AMajorOptions& opts = {});

struct GapCheck {
  bool gap = false;          // certified F_min(psi) > certified F_max(phi)
  bool converts = false;     // one_shot_convertible(psi, phi).holds
  QfiBracket f_min_psi;
  QfiBracket f_max_phi;
};

// Throws std::logic_error if a certified gap is found without conversion.
GapCheck sufficiency_gap_check(const PureState& psi, const PureState& phi, const FisherOptions& opts = {});

}  // namespace asym
