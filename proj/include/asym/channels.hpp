// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "asym/qfi.hpp"

namespace asym {

// Ladder Kraus operator K = sum_n coeffs[n] |n - shift><n|.
struct KrausOp {
  Index shift = 0;
  std::vector<std::complex<double>> coeffs;  // indexed by input level

  std::complex<double> coeff(Index n) const {
    return n >= 0 && n < static_cast<Index>(coeffs.size()) ? coeffs[static_cast<std::size_t>(n)]
                                                             : std::complex<double>{};
  }
};

// Covariant channel from input levels [0, in_trunc) to [0, out_trunc) given
// by fixed-shift ladder Kraus operators. Immutable once validated.
struct CovariantChannel {
  Index in_trunc = 0;
  Index out_trunc = 0;
  std::vector<KrausOp> kraus;

  static CovariantChannel identity(Index n);
  // One Kraus |n><n| per level.
  static CovariantChannel dephasing(Index n);

  // sum_ops |c_n|^2 = 1 within tol for every input level, and every nonzero
  // coefficient maps into [0, out_trunc). Throws std::invalid_argument.
  void validate(double tol = 1e-10) const;
  // sum_ops |c_n|^2 for each input level.
  std::vector<double> completeness() const;
  std::vector<Eigen::MatrixXcd> dense() const;
};

// General finite Kraus channel between spaces with diagonal integer
// Hamiltonians (in_energies, out_energies). Used for channels that are not
// written in ladder form.
struct KrausChannel {
  std::vector<Index> in_energies;
  std::vector<Index> out_energies;
  std::vector<Eigen::MatrixXcd> ops;  // out x in

  static KrausChannel from(const CovariantChannel& e);
  static KrausChannel unitary(const Eigen::MatrixXcd& u, std::vector<Index> energies);
  // Tr over an ancilla: input basis |s, a> (index s * n_anc + a, energy
  // sys_energies[s] + anc_energies[a]), output |s>.
  static KrausChannel partial_trace(std::vector<Index> sys_energies, std::vector<Index> anc_energies);

  // max |sum_K K^dag K - I|
  double completeness_error() const;
};

struct CovarianceReport {
  double completeness_error = 0.0;
  // Exact check on the channel: E(|n><n'|) populates |m><m'| only when
  // e_m - e_m' = e_n - e_n'. Authoritative.
  bool structural = false;
  // E(U_t rho U_t^dag) = U_t E(rho) U_t^dag on sampled states and times.
  bool sampled = false;
  double max_sampled_deviation = 0.0;
  bool agree() const { return structural == sampled; }
};

// Throws std::invalid_argument on a completeness violation (> 1e-10).
CovarianceReport verify_covariant_report(const KrausChannel& e, int samples = 4, std::uint64_t seed = 1);
CovarianceReport verify_covariant_report(const CovariantChannel& e, int samples = 4, std::uint64_t seed = 1);
bool verify_covariant(const CovariantChannel& e, int samples = 4, std::uint64_t seed = 1);
bool verify_covariant(const KrausChannel& e, int samples = 4, std::uint64_t seed = 1);

// sum_K K rho K^dag. rho must live on the ladder [0, in_trunc).
DensityMatrix apply(const CovariantChannel& e, const DensityMatrix& rho);
DensityMatrix apply(const KrausChannel& e, const DensityMatrix& rho);

// Exact covariant channel mapping psi to phi, from the rational
// a-majorization witness w: one Kraus per k in supp w with
// c_n = sqrt(w(k) p_phi(n-k) / p_psi(n)) times the phase difference, and
// |0><n| for levels outside supp p_psi. Throws std::invalid_argument when
// psi does not a-majorize phi.
CovariantChannel build_conversion(const PureState& psi, const PureState& phi, const AMajorOptions& opts = {});

struct PhaseAlignment {
  std::vector<double> phases;  // U = sum_n e^{i phases[n]} |n><n| on psi's levels
  double achieved_distance = 0.0;  // sqrt(1 - BC(p_psi, p_phi)^2)
  double dtv_bound = 0.0;          // sqrt(2 d_TV(p_psi, p_phi))
};

PhaseAlignment phase_align_unitary(const PureState& psi, const PureState& phi);
PureState apply_phases(const PureState& psi, const std::vector<double>& phases);

struct Dilation {
  Purification phi;            // system output levels x (k, u) ancilla
  F64Seq total_profile;        // distribution of system + ancilla energy
  double tv_to_poisson = 0.0;  // against the untruncated P_lambda
  double truncation_tail = 0.0;
  double reduced_error = 0.0;  // max |Tr_anc Phi - E(chi_lambda)|
  bool ok = false;
};

// Stinespring dilation V|n> = sum_op c_n |n - k> |op> (ancilla energy k)
// applied to chi_lambda on [0, in_trunc).
Dilation purification_profile_check(const CovariantChannel& e, const Rational& lambda);

struct SmoothingWitness {
  PureState psi_prime;
  RatSeq profile;  // w * p_phi, exactly
  F64Seq w;        // shift statistics extracted from the channel
  double eps = 0.0;
  double dist = 0.0;
  double bound = 0.0;        // sqrt(2 sqrt(1 - (1 - eps)^2))
  double loose_bound = 0.0;  // 2 eps^{1/4}
  bool majorizes = false;    // p_{psi'} >_a p_phi, exact
};

double smoothing_bound(double eps);

SmoothingWitness smoothing_witness(const PureState& psi, const PureState& phi, const CovariantChannel& e);

// Random ladder channel: n_ops Kraus operators with shifts drawn from
// [min_shift, max_shift] and Gaussian coefficients, columns normalized.
// Levels with no admissible operator fall back to |0><n|.
CovariantChannel random_covariant_channel(Index in_trunc, Index out_trunc, int n_ops, Index min_shift,
                                          Index max_shift, std::mt19937_64& rng);

}  // namespace asym
