// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "asym/channels.hpp"
#include "asym/qfi.hpp"
#include "support.hpp"

using namespace asym;
using asym::testing::random_rat_dist;
using asym::testing::random_state;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// F = Tr(rho L^2) with L from rho L + L rho = 2 d rho, d rho = -i[H, rho],
// solved densely through the Kronecker form.
double sld_qfi(const DensityMatrix& rho) {
  const Index d = rho.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (Index i = 0; i < d; ++i) h(i, i) = static_cast<double>(rho.energies[static_cast<std::size_t>(i)]);
  const std::complex<double> i1(0.0, 1.0);
  const Eigen::MatrixXcd drho = -i1 * (h * rho.rho - rho.rho * h);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      sys.block(a * d, b * d, d, d) += id(a, b) * rho.rho;
      sys.block(a * d, b * d, d, d) += rho.rho.transpose()(a, b) * id;
    }
  const Eigen::VectorXcd rhs = 2.0 * Eigen::Map<const Eigen::VectorXcd>(drho.data(), d * d);
  const Eigen::VectorXcd x = sys.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::MatrixXcd l = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  return (rho.rho * l * l).trace().real();
}

DensityMatrix random_density(std::mt19937_64& rng, Index d, bool diagonal) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd rho = a * a.adjoint();
  if (diagonal) rho = Eigen::MatrixXcd(rho.diagonal().asDiagonal());
  rho /= rho.trace().real();
  std::vector<Index> e(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) e[static_cast<std::size_t>(i)] = i;
  return DensityMatrix::make(rho, e);
}

// Sign test for P_lambda * (2 (-1)^n) on [0, hi], exact with lambda rational.
bool coin_witness_nonnegative(const Rational& lambda, Index hi) {
  const RatSeq k = poisson_kernel(lambda, hi + 1);
  Rational acc(0);
  for (Index n = 0; n <= hi; ++n) {
    // acc(n) = k(n) - acc(n - 1) is half the convolution.
    acc = k(n) - acc;
    if (sgn(acc) < 0) return false;
  }
  return true;
}

// States with certified non-trivial brackets: w * P_sigma profiles.
PureState random_mixture_state(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> r(1, 12);
  return poisson_mixture_state(Rational(r(rng), 4), random_rat_dist(rng, 3));
}

FisherOptions fast() { return {Backend::rational, 1e-6, 64, {}}; }

}  // namespace

TEST_CASE("qfi of pure states") {
  CHECK(qfi_pure(eigenstate(3)) == 0.0);
  CHECK(qfi_pure(coherence_bit()) == doctest::Approx(1.0));
  for (int l : {1, 2, 5}) CHECK(qfi_pure(poisson_profile_state(l)) == doctest::Approx(4.0 * l).epsilon(1e-12));
}

TEST_CASE("qfi of mixed states") {
  const PureState chi = poisson_profile_state(1, 24);
  CHECK(qfi_mixed(DensityMatrix::from_pure(chi)) == doctest::Approx(4.0).epsilon(1e-9));
  const DensityMatrix mm = DensityMatrix::diagonal(F64Seq(0, {0.5, 0.5}));
  CHECK(qfi_mixed(mm) == doctest::Approx(0.0));
  Eigen::MatrixXcd rho = 0.5 * DensityMatrix::from_pure(coherence_bit()).rho;
  rho += 0.25 * Eigen::MatrixXcd::Identity(2, 2);
  const DensityMatrix mix = DensityMatrix::make(rho, {0, 1});
  const double f = qfi_mixed(mix);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(f == doctest::Approx(sld_qfi(mix)).epsilon(1e-10));
}

TEST_CASE("qfi_mixed agrees with the SLD solve") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho = random_density(rng, 2 + trial % 4, false);
    CHECK(qfi_mixed(rho) == doctest::Approx(sld_qfi(rho)).epsilon(1e-8));
  }
}

TEST_CASE("qfi_mixed vanishes exactly on symmetric states") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const bool diag = trial % 2 == 0;
    const DensityMatrix rho = random_density(rng, 2 + trial % 5, diag);
    const bool symmetric = rho.commutator_norm() <= 1e-10;
    CHECK(symmetric == diag);
    CHECK((qfi_mixed(rho) <= 1e-10) == symmetric);
  }
}

TEST_CASE("qfi_mixed on rank one states matches qfi_pure") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const PureState psi = random_state(rng, 8);
    CHECK(std::fabs(qfi_mixed(DensityMatrix::from_pure(psi)) - qfi_pure(psi)) <= 1e-9);
  }
}

TEST_CASE("F_max and F_min of Poisson-profile states") {
  for (const char* l : {"1/2", "1", "2", "5"}) {
    const Rational lam = parse_rational(l);
    const PureState chi = poisson_profile_state(lam);
    for (Backend b : {Backend::rational, Backend::f64}) {
      FisherOptions o{b, 1e-6, 64, {}};
      const QfiBracket hi = f_max_pure(chi, o);
      const QfiBracket lo = f_min_pure(chi, o);
      CAPTURE(l);
      CHECK(hi.kind == BoundKind::exact);
      CHECK(lo.kind == BoundKind::exact);
      CHECK(std::fabs(hi.value - 4 * lam.get_d()) <= 1e-4);
      CHECK(std::fabs(lo.value - 4 * lam.get_d()) <= 1e-4);
      CHECK(hi.lower <= 4 * lam.get_d() + 1e-12);
      CHECK(hi.upper >= 4 * lam.get_d() - 1e-12);
    }
  }
}

TEST_CASE("eigenstates have zero F_max and F_min") {
  for (Index n : {0, 4}) {
    CHECK(f_max_pure(eigenstate(n)).value == 0.0);
    CHECK(f_max_pure(eigenstate(n)).kind == BoundKind::exact);
    CHECK(f_min_pure(eigenstate(n)).value == 0.0);
  }
}

TEST_CASE("coherence bit: F_max bracket against a grid scan") {
  const QfiBracket b = f_max_pure(coherence_bit(), fast());
  // No Poisson profile majorizes a finite non-degenerate profile.
  CHECK(b.value == kInf);
  CHECK(b.kind == BoundKind::exact);
  CHECK(b.lower == kInf);
  CHECK(b.window_value >= 1.0);
  // The window-limited edge agrees with an exact scan on the same window.
  const double step = 0.1;
  int first = -1;
  for (int i = 1; i <= 400; ++i)
    if (coin_witness_nonnegative(Rational(i, 10), b.window_hi)) {
      first = i;
      break;
    }
  REQUIRE(first > 0);
  const double grid_edge = first * step;
  CHECK(b.window_value / 4.0 <= grid_edge + 1e-6);
  CHECK(b.window_value / 4.0 > grid_edge - step - 1e-6);
  for (int i = first; i <= first + 20; ++i) CHECK(coin_witness_nonnegative(Rational(i, 10), b.window_hi));
}

TEST_CASE("coherence bit: F_min is zero") {
  const QfiBracket b = f_min_pure(coherence_bit(), fast());
  CHECK(b.value <= 1e-5);
  CHECK(b.lower == 0.0);
  // p * P_{-lambda} at n = 2 is e^{lambda} lambda (lambda - 2) / 4 < 0 on (0, 2).
  const RatSeq p(0, {Rational(1, 2), Rational(1, 2)});
  for (int i = 1; i <= 100; ++i) {
    const Rational lam(i, 100);
    CHECK(sgn(convolve(p, poisson_kernel(Rational(-lam), 4))(2)) < 0);
  }
}

TEST_CASE("sandwich holds bracket-aware") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const PureState psi = trial % 3 == 0 ? random_state(rng, 5) : random_mixture_state(rng);
    const double f = qfi_pure(psi);
    const QfiBracket hi = f_max_pure(psi, fast());
    const QfiBracket lo = f_min_pure(psi, fast());
    CAPTURE(trial);
    CHECK(hi.upper >= f - 1e-6);
    CHECK(lo.lower <= f + 1e-6);
    CHECK(hi.lower <= hi.upper);
    CHECK(lo.lower <= lo.upper);
    if (psi.factor()) CHECK(lo.lower >= 4 * psi.factor()->rate.get_d() - 1e-6);
  }
}

TEST_CASE("F_max and F_min are monotone under conversion") {
  std::mt19937_64 rng(35);
  int pairs = 0;
  for (int trial = 0; trial < 40; ++trial) {
    PureState psi, phi;
    if (trial % 2 == 0) {
      phi = random_mixture_state(rng);
      const RatSeq w = random_rat_dist(rng, 3);
      psi = poisson_mixture_state(phi.factor()->rate + Rational(trial % 5, 4), convolve(w, phi.factor()->mixing));
    } else {
      const RatSeq q = random_rat_dist(rng, 4);
      phi = PureState::from_exact_profile(q);
      psi = PureState::from_exact_profile(convolve(random_rat_dist(rng, 3), q));
    }
    if (!one_shot_convertible<Rational>(psi, phi).holds) continue;
    ++pairs;
    const QfiBracket ma = f_max_pure(psi, fast()), mb = f_max_pure(phi, fast());
    const QfiBracket na = f_min_pure(psi, fast()), nb = f_min_pure(phi, fast());
    CAPTURE(trial);
    CHECK_FALSE(ma.upper < mb.lower - 1e-6);
    CHECK_FALSE(na.upper < nb.lower - 1e-6);
  }
  CHECK(pairs >= 30);
}

TEST_CASE("mixed-state F_max upper bound") {
  SUBCASE("pure input equals the pure value") {
    for (const PureState& psi : {coherence_bit(), eigenstate(2)}) {
      const QfiBracket m = f_max_mixed_upper(DensityMatrix::from_pure(psi));
      const QfiBracket p = f_max_pure(psi, {Backend::f64, 1e-4, 64, {}});
      CHECK(m.value == p.value);
    }
  }
  SUBCASE("symmetric input gives zero") {
    const QfiBracket m = f_max_mixed_upper(DensityMatrix::diagonal(F64Seq(0, {0.2, 0.5, 0.3})));
    CHECK(m.value == 0.0);
    CHECK(m.kind == BoundKind::exact);
  }
  SUBCASE("channel image of chi_1 is bounded by 4") {
    std::mt19937_64 rng(36);
    const CovariantChannel e = random_covariant_channel(14, 14, 3, 0, 2, rng);
    const Dilation dil = purification_profile_check(e, 1);
    REQUIRE(dil.ok);
    const DensityMatrix rho = apply(e, DensityMatrix::from_pure(poisson_profile_state(1, 14)));
    MixedSearchOptions o;
    o.seeds.push_back(dil.phi);
    const QfiBracket m = f_max_mixed_upper(rho, o);
    CHECK(m.upper <= 4.0 + 1e-4);
    CHECK(m.lower == doctest::Approx(qfi_mixed(rho)));
    CHECK(m.lower <= m.upper);
  }
}

TEST_CASE("one-shot convertibility") {
  const PureState c1 = poisson_profile_state(1), c2 = poisson_profile_state(2);
  CHECK(one_shot_convertible<Rational>(c2, c1).holds);
  CHECK_FALSE(one_shot_convertible<Rational>(c1, c2).holds);
  std::mt19937_64 rng(37);
  const PureState psi = random_state(rng, 6);
  CHECK(one_shot_convertible<Rational>(psi, psi).holds);
  CHECK(one_shot_convertible<double>(psi, psi).holds);
}

TEST_CASE("sufficiency gap") {
  const GapCheck g = sufficiency_gap_check(poisson_profile_state(3), poisson_profile_state(1));
  CHECK(g.gap);
  CHECK(g.converts);
  const PureState c1 = poisson_profile_state(1);
  CHECK_FALSE(sufficiency_gap_check(c1, c1).gap);
  const GapCheck h = sufficiency_gap_check(c1, coherence_bit());
  CHECK_FALSE(h.gap);
  CHECK(h.f_max_phi.lower >= 1.0);
}
