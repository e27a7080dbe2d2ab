// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "asym/dists.hpp"
#include "support.hpp"

using namespace asym;
using asym::testing::random_f64_dist;
using asym::testing::random_rat_dist;

namespace {

const RatSeq kCoin(0, {Rational(1, 2), Rational(1, 2)});

}  // namespace

TEST_CASE("representation is normalized") {
  const RatSeq a(3, {Rational(0), Rational(1, 2), Rational(0), Rational(1, 2), Rational(0)});
  CHECK(a.lo() == 4);
  CHECK(a.hi() == 6);
  CHECK(a.size() == 3);
  CHECK(a(5) == 0);
  CHECK(a(100) == 0);
  const RatSeq z(7, {Rational(0), Rational(0)});
  CHECK(z.empty());
  CHECK(z.lo() == 0);
  CHECK(z == RatSeq());
}

TEST_CASE("convolution examples") {
  std::mt19937_64 rng(1);
  const RatSeq a = random_rat_dist(rng, 6, -2);
  CHECK(convolve(RatSeq::delta(0), a) == a);
  CHECK(convolve(kCoin, kCoin) == RatSeq(0, {Rational(1, 4), Rational(1, 2), Rational(1, 4)}));
  // Unscaled Poisson kernels: (1^n/n!) * (2^n/n!) = 3^n/n! on the common prefix.
  const Index n = 30;
  CHECK(restrict_to(convolve(poisson_kernel(1, n), poisson_kernel(2, n)), 0, n - 1) == poisson_kernel(3, n));
  CHECK(convolve(RatSeq(), a).empty());
}

TEST_CASE("partial convolution") {
  std::mt19937_64 rng(2);
  const RatSeq a = random_rat_dist(rng, 6);
  const RatSeq b = random_rat_dist(rng, 6, 1);
  for (Index n = -1; n <= 12; ++n) {
    CHECK(partial_convolve(RatSeq::delta(0), a, 0, 0, n) == a(n));
    CHECK(partial_convolve(a, b, a.lo(), a.hi(), n) == convolve(a, b)(n));
    const PartialConvolution<Rational> pc(a, b, a.lo(), a.hi());
    CHECK(pc(n) == convolve(a, b)(n));
  }
  CHECK_THROWS_AS(partial_convolve(a, b, 3, 2, 0), std::invalid_argument);
}

TEST_CASE("reciprocal recursion driver") {
  // q(n*) q~(n - n*) = -sum_{k=-n*}^{n-n*-1} q~(k) q(n - k) for n >= 1.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RatSeq q = random_rat_dist(rng, 5, trial % 3);
    const Index ns = q.lo();
    const auto r = reciprocal(q, 20);
    for (Index n = 1; n <= 20; ++n)
      CHECK(q(ns) * r.seq(n - ns) == -partial_convolve(r.seq, q, -ns, n - ns - 1, n));
  }
}

TEST_CASE("reciprocal examples") {
  for (const char* lam : {"1/2", "1", "3"}) {
    const Rational l = parse_rational(lam);
    const auto r = reciprocal(poisson_kernel(l, 40), 39);
    CHECK(r.seq == poisson_kernel(Rational(-l), 40));
    CHECK(r.identity_hi >= 39);
  }
  for (Index k : {0, 3, -2}) CHECK(reciprocal(RatSeq::delta(k), 10).seq == RatSeq::delta(-k));
  const auto r = reciprocal(kCoin, 25);
  for (Index n = 0; n <= 25; ++n) CHECK(r.seq(n) == (n % 2 == 0 ? 2 : -2));
  CHECK_THROWS_AS(reciprocal(RatSeq(), 5), std::invalid_argument);
}

TEST_CASE("reciprocal identity and involution on random sequences") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const RatSeq q = random_rat_dist(rng, 6, trial % 4);
    const Index h = 8 + trial % 10;
    const auto r = reciprocal(q, h);
    const RatSeq id = convolve(r.seq, q);
    for (Index n = -20; n <= r.identity_hi; ++n) CHECK(id(n) == (n == 0 ? 1 : 0));
    // q~~ = q on the common window.
    const auto rr = reciprocal(r.seq, h);
    for (Index n = q.lo(); n <= rr.window_hi; ++n) CHECK(rr.seq(n) == q(n));
  }
}

TEST_CASE("float reciprocal tracks the exact one on well-conditioned input") {
  const RatSeq q(0, {Rational(3, 4), Rational(1, 4)});
  const auto exact = reciprocal(q, 30);
  const auto approx = reciprocal(to_f64(q), 30);
  for (Index n = 0; n <= 30; ++n) CHECK(approx.seq(n) == doctest::Approx(exact.seq(n).get_d()).epsilon(1e-12));
}

TEST_CASE("shift examples") {
  std::mt19937_64 rng(5);
  const RatSeq a = random_rat_dist(rng, 6);
  CHECK(shift(a, 0) == a);
  CHECK(shift(RatSeq::delta(0), 2) == RatSeq::delta(2));
  for (Index k : {-3, 1, 4}) CHECK(shift(shift(a, k), -k) == a);
}

TEST_CASE("total variation and Bhattacharyya examples") {
  std::mt19937_64 rng(6);
  const RatSeq p = random_rat_dist(rng, 6);
  CHECK(tv_distance(p, p) == 0);
  CHECK(tv_distance(RatSeq::delta(0), RatSeq::delta(1)) == 1);
  CHECK(tv_distance(kCoin, RatSeq::delta(0)) == Rational(1, 2));
  CHECK(bhattacharyya(p, p) == doctest::Approx(1.0));
  CHECK(bhattacharyya(RatSeq::delta(0), RatSeq::delta(1)) == 0.0);
  CHECK(bhattacharyya(kCoin, RatSeq::delta(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("convolution is commutative and associative") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const RatSeq a = random_rat_dist(rng, 5, -1), b = random_rat_dist(rng, 5, 2), c = random_rat_dist(rng, 4);
    CHECK(convolve(a, b) == convolve(b, a));
    CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
  }
}

TEST_CASE("convolution window matches full convolution") {
  std::mt19937_64 rng(8);
  const RatSeq a = random_rat_dist(rng, 7), b = random_rat_dist(rng, 7, 3);
  CHECK(convolve_window(a, b, 4, 9) == restrict_to(convolve(a, b), 4, 9));
  const F64Seq fa = to_f64(a), fb = to_f64(b);
  const F64Seq fc = convolve(fa, fb);
  const RatSeq c = convolve(a, b);
  for (Index n = c.lo(); n <= c.hi(); ++n) CHECK(fc(n) == doctest::Approx(c(n).get_d()).epsilon(1e-14));
}

TEST_CASE("total variation is a metric") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const RatSeq p = random_rat_dist(rng, 5), q = random_rat_dist(rng, 5, 1), r = random_rat_dist(rng, 5);
    CHECK(tv_distance(p, q) == tv_distance(q, p));
    CHECK((tv_distance(p, q) == 0) == (p == q));
    CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r));
  }
}

TEST_CASE("Bhattacharyya brackets the total variation distance") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const F64Seq p = random_f64_dist(rng, 1 + trial % 7);
    const F64Seq q = shift(random_f64_dist(rng, 1 + (trial / 7) % 7), trial % 3);
    const double bc = bhattacharyya(p, q), tv = tv_distance(p, q);
    CHECK(1.0 - bc <= tv + 1e-12);
    CHECK(tv <= std::sqrt(std::max(0.0, 1.0 - bc * bc)) + 1e-12);
  }
}

TEST_CASE("moments") {
  const RatSeq p(0, {Rational(1, 4), Rational(1, 2), Rational(1, 4)});
  CHECK(mass(p) == 1);
  CHECK(mean(p) == 1);
  CHECK(variance(p) == Rational(1, 2));
  CHECK(min_entry(RatSeq(0, {Rational(1), Rational(-2), Rational(3)})) == -2);
}

TEST_CASE("rational text form") {
  CHECK(format_rational(parse_rational("-6/4")) == "-3/2");
  CHECK(format_rational(parse_rational("7")) == "7");
  CHECK(to_rational(0.375) == Rational(3, 8));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("simplest rational") {
  CHECK(simplest_rational(1.0 / 3.0, 1e-12, 1000000) == Rational(1, 3));
  CHECK(simplest_rational(-7.0 / 11.0, 1e-12, 1000000) == Rational(-7, 11));
  CHECK(simplest_rational(0.25, 0.0, 10) == Rational(1, 4));
  CHECK(simplest_rational(3.0, 1e-12, 1) == Rational(3));
  // No convergent with a small enough denominator: exact value.
  CHECK(simplest_rational(1.0 / 3.0, 1e-12, 2) == to_rational(1.0 / 3.0));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(1, 999), n(-2000, 2000);
  for (int i = 0; i < 500; ++i) {
    Rational r(n(rng), d(rng));
    r.canonicalize();
    CHECK(simplest_rational(r.get_d(), 1e-12, 1000000) == r);
  }
}
