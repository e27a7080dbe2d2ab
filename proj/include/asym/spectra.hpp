// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asym/qfi.hpp"

namespace asym {

struct SmoothOptions {
  // Maximum number of candidate evaluations per call.
  int budget = 256;
  // Bisection width in F units.
  double tol = 1e-3;
  // Used for eps = 0 and for the unsmoothed candidate.
  FisherOptions fisher{Backend::f64, 1e-6, 64, {}};
};

// Certified upper bound on the eps-smoothed max-QFI. Every accepted
// candidate is a state within trace distance eps of psi whose F_max is
// certified: mixed states E(chi_lambda) for a covariant channel E (F_max <=
// 4 lambda), shift mixtures of chi_lambda, and shifted Poisson profiles.
// kind = upper_bound; lower = 0. eps = 0 returns f_max_pure.
QfiBracket smooth_f_max(const PureState& psi, double eps, const SmoothOptions& opts = {});

// Certified lower bound on the eps-smoothed min-QFI over pure states:
// candidates have profile w * P_sigma (F_min = 4 sigma) with w maximizing the
// Bhattacharyya coefficient to p_psi. kind = lower_bound. eps = 0 returns
// f_min_pure.
QfiBracket smooth_f_min(const PureState& psi, double eps, const SmoothOptions& opts = {});

// Brute force over sub-families on a step-0.02 simplex grid of weights:
// matched channels on windows of at most 3 consecutive shifts plus shifted
// Poisson profiles (F_max), and w * P_sigma with w on the at most 4 levels of
// psi (F_min). Requires psi to occupy at most 4 consecutive levels. The
// F_max grid reports +inf when none of its candidates reaches the ball.
QfiBracket smooth_f_max_grid(const PureState& psi, double eps, const SmoothOptions& opts = {});
QfiBracket smooth_f_min_grid(const PureState& psi, double eps, const SmoothOptions& opts = {});

enum class FamilyKind { iid, custom };
enum class RateDirection { sup, inf };

const char* rate_direction_name(RateDirection d);
RateDirection parse_rate_direction(std::string_view s);

struct StateFamily {
  std::string label;
  std::function<PureState(int)> generator;  // m >= 1, deterministic
  FamilyKind kind = FamilyKind::custom;
};

// psi^{(x) m} for a zero-phase base state: exact profile p^{*m}, Poisson tag
// carried over.
StateFamily iid_family(const std::string& label, const PureState& base);
// "iid:coin", "iid:poisson:<rate>", "eigen".
StateFamily family_from_spec(const std::string& spec);

struct RatePoint {
  int m = 0;
  QfiBracket raw;
  double per_m = 0.0;
};

struct RateEstimate {
  double eps = 0.0;
  RateDirection direction = RateDirection::sup;
  std::vector<RatePoint> per_m;
  double extrapolated = 0.0;  // mean of the last three per_m values
  double spread = 0.0;        // max - min of those values
};

RateEstimate spectral_rate(const StateFamily& fam, double eps, const std::vector<int>& ms, RateDirection dir,
                           const SmoothOptions& opts = {});

struct TpCertificateRow {
  int m = 0;
  double dtv = 0.0;
  double bound = 0.0;
  bool ok = false;
};

// d_TV(p^{*m}, TP_{m mean, m var}) against the Barbour bound with parameters
// derived from p. Throws std::invalid_argument for zero variance.
std::vector<TpCertificateRow> iid_tp_certificate(const F64Dist& p, const std::vector<int>& ms);

}  // namespace asym
