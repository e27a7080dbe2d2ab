// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "asym/entbridge.hpp"

using namespace asym;

namespace {

std::vector<Rational> random_rat_vector(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> u(0, 5);
  std::vector<Rational> v(static_cast<std::size_t>(dim));
  Rational s(0);
  while (s == 0) {
    s = 0;
    for (auto& x : v) s += (x = u(rng));
  }
  for (auto& x : v) x /= s;
  return v;
}

// q = D p with D a random convex combination of permutation matrices.
std::vector<Rational> doubly_stochastic_image(std::mt19937_64& rng, const std::vector<Rational>& p) {
  std::uniform_int_distribution<int> u(1, 4);
  std::vector<Rational> q(p.size(), Rational(0));
  std::vector<std::size_t> perm(p.size());
  Rational total(0);
  for (int t = 0; t < 3; ++t) {
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const Rational w = u(rng);
    total += w;
    for (std::size_t i = 0; i < p.size(); ++i) q[perm[i]] += w * p[i];
  }
  for (auto& x : q) x /= total;
  return q;
}

SchmidtVector schmidt(const std::vector<Rational>& v) {
  std::vector<double> d;
  for (const auto& x : v) d.push_back(to_double(x));
  return SchmidtVector::make(std::move(d));
}

std::vector<Rational> sorted_desc(std::vector<Rational> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double log2_rank_cut(std::vector<double> ev, double eps) {
  std::sort(ev.begin(), ev.end(), std::greater<>());
  double kept = 0.0;
  std::size_t r = 0;
  while (r < ev.size() && kept < 1.0 - eps - 1e-15) kept += ev[r++];
  return std::log2(static_cast<double>(std::max<std::size_t>(r, 1)));
}

}  // namespace

TEST_CASE("majorization and Nielsen examples") {
  const SchmidtVector product = SchmidtVector::make({1.0, 0.0});
  const SchmidtVector bell = SchmidtVector::make({0.5, 0.5});
  CHECK(majorizes(product, bell));
  CHECK_FALSE(majorizes(bell, product));
  CHECK(nielsen_convertible(bell, product));
  CHECK_FALSE(nielsen_convertible(product, bell));
  // Zero padding to the longer length.
  CHECK(majorizes(SchmidtVector::make({0.5, 0.5}), SchmidtVector::make({0.4, 0.3, 0.3})));
  CHECK(SchmidtVector::make({0.2, 0.8}).probs == std::vector<double>{0.8, 0.2});
  CHECK_THROWS_AS(SchmidtVector::make({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(SchmidtVector::make({1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("prefix sums agree with doubly stochastic feasibility") {
  std::mt19937_64 rng(61);
  int pairs = 0, positives = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int dim = 1 + trial % 4;
    const std::vector<Rational> p = random_rat_vector(rng, dim);
    const std::vector<Rational> q = trial % 3 == 0 ? doubly_stochastic_image(rng, p) : random_rat_vector(rng, dim);
    const bool prefix = majorizes(schmidt(p), schmidt(q));
    const bool lp = majorizes_hlp(sorted_desc(p), sorted_desc(q));
    CAPTURE(trial);
    CHECK(prefix == lp);
    CHECK(majorizes_hlp(schmidt(p), schmidt(q)) == lp);
    ++pairs;
    positives += lp;
    // Nielsen: mutual convertibility only for equal sorted vectors.
    if (nielsen_convertible(schmidt(p), schmidt(q)) && nielsen_convertible(schmidt(q), schmidt(p)))
      CHECK(sorted_desc(p) == sorted_desc(q));
  }
  CHECK(pairs >= 300);
  CHECK(positives >= 100);
  CHECK(positives <= pairs - 100);
}

TEST_CASE("entropy examples") {
  const auto close = [](const Entropies& e, double s, double smax, double smin) {
    CHECK(e.s == doctest::Approx(s).epsilon(1e-12));
    CHECK(e.s_max == doctest::Approx(smax).epsilon(1e-12));
    CHECK(e.s_min == doctest::Approx(smin).epsilon(1e-12));
  };
  close(entropies(DensityMatrix::diagonal(F64Seq(0, {0.25, 0.25, 0.25, 0.25}))), 2.0, 2.0, 2.0);
  const Entropies pure = entropies(DensityMatrix::from_pure(coherence_bit()));
  CHECK(std::fabs(pure.s) <= 1e-12);
  CHECK(pure.s_max == 0.0);
  CHECK(std::fabs(pure.s_min) <= 1e-12);
  close(entropies(DensityMatrix::diagonal(F64Seq(0, {0.5, 0.25, 0.25}))), 1.5, std::log2(3.0), 1.0);
}

TEST_CASE("entropy sandwich on random density matrices") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 5;
    Eigen::MatrixXcd a(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
    if (trial % 7 == 0) a.col(0).setZero();
    Eigen::MatrixXcd rho = a * a.adjoint();
    if (rho.trace().real() == 0.0) rho(0, 0) = 1.0;
    rho /= rho.trace().real();
    std::vector<Index> energies(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) energies[static_cast<std::size_t>(i)] = i;
    const Entropies e = entropies(DensityMatrix::make(rho, energies));
    CHECK(e.s_max >= e.s - 1e-12);
    CHECK(e.s >= e.s_min - 1e-12);
    CHECK(e.s_max <= std::log2(static_cast<double>(d)) + 1e-12);
  }
}

TEST_CASE("smooth entropies") {
  SUBCASE("eps = 0") {
    const Spectrum sp = Spectrum::of({0.5, 0.3, 0.2});
    const SmoothEntropies s = smooth_entropies(sp, 0.0);
    const Entropies e = entropies(sp);
    CHECK(s.s_max_upper == e.s_max);
    CHECK(s.s_min_lower == e.s_min);
    CHECK_THROWS_AS(smooth_entropies(sp, 1.0), std::invalid_argument);
  }
  SUBCASE("tail cut") {
    const double delta = 0.01;
    std::vector<double> ev{1.0 - delta};
    for (int i = 0; i < 5; ++i) ev.push_back(delta / 5);
    const SmoothEntropies s = smooth_entropies(Spectrum::of(ev), 0.05);
    CHECK(s.s_max_upper == 0.0);
    CHECK(s.s_max_kind == BoundKind::upper_bound);
  }
  SUBCASE("tail cut against the sorted expansion") {
    std::mt19937_64 rng(63);
    std::exponential_distribution<double> x(1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> ev(static_cast<std::size_t>(2 + trial % 7));
      double t = 0.0;
      for (auto& y : ev) t += (y = x(rng));
      for (auto& y : ev) y /= t;
      for (double eps : {0.01, 0.1, 0.3}) {
        const SmoothEntropies s = smooth_entropies(Spectrum::of(ev), eps);
        CHECK(s.s_max_upper == doctest::Approx(log2_rank_cut(ev, eps)));
        // Peak flatten never beats the uniform spectrum and never loses mass.
        CHECK(s.s_min_lower <= std::log2(static_cast<double>(ev.size())) + 1e-9);
        CHECK(s.s_min_lower >= entropies(Spectrum::of(ev)).s_min - 1e-12);
      }
    }
  }
  SUBCASE("monotone in eps") {
    const Spectrum sp = Spectrum::iid_power({0.7, 0.2, 0.1}, 8);
    double prev_max = 1e300, prev_min = -1.0;
    for (double eps : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5}) {
      const SmoothEntropies s = smooth_entropies(sp, eps);
      CHECK(s.s_max_upper <= prev_max + 1e-12);
      CHECK(s.s_min_lower >= prev_min - 1e-12);
      prev_max = s.s_max_upper;
      prev_min = s.s_min_lower;
    }
  }
}

TEST_CASE("i.i.d. spectra") {
  // Multiplicity form against the explicit 3^5 product.
  const std::vector<double> ev{0.6, 0.3, 0.1};
  std::vector<double> full{1.0};
  for (int k = 0; k < 5; ++k) {
    std::vector<double> next;
    for (double a : full)
      for (double b : ev) next.push_back(a * b);
    full.swap(next);
  }
  const Spectrum sp = Spectrum::iid_power(ev, 5);
  CHECK(sp.mass() == doctest::Approx(1.0).epsilon(1e-12));
  const Entropies a = entropies(sp), b = entropies(Spectrum::of(full));
  CHECK(a.s == doctest::Approx(b.s).epsilon(1e-12));
  CHECK(a.s_max == doctest::Approx(b.s_max));
  CHECK(a.s_min == doctest::Approx(b.s_min));
  for (double eps : {0.05, 0.2}) {
    const SmoothEntropies x = smooth_entropies(sp, eps), y = smooth_entropies(Spectrum::of(full), eps);
    CHECK(x.s_max_upper == doctest::Approx(y.s_max_upper));
    CHECK(x.s_min_lower == doctest::Approx(y.s_min_lower).epsilon(1e-9));
  }
}

TEST_CASE("smooth max-entropy plateau of the maximally entangled qubit") {
  const auto rates = iid_smooth_entropy_rates({0.5, 0.5}, {5, 10, 15, 20}, 0.05);
  REQUIRE(rates.size() == 4);
  CHECK(std::fabs(rates.back().s_max_rate - 1.0) <= 0.1);
  CHECK(std::fabs(rates.back().s_min_rate - 1.0) <= 0.1);
}

TEST_CASE("correspondence rows") {
  const auto rows = correspondence_demo(120, 7);
  REQUIRE(rows.size() == 120);
  int rta = 0, ent = 0;
  for (const auto& r : rows) {
    CAPTURE(r.id);
    CHECK(r.rta_convertible == r.rta_predicate);
    CHECK(r.ent_convertible == r.ent_predicate);
    rta += r.rta_convertible;
    ent += r.ent_convertible;
  }
  CHECK(rta >= 30);
  CHECK(ent >= 10);
  const auto again = correspondence_demo(120, 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].p == rows[i].p);
    CHECK(again[i].q == rows[i].q);
  }
  CHECK_THROWS_AS(correspondence_demo(0, 1), std::invalid_argument);
}
