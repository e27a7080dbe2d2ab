// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/entbridge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "asym/lp.hpp"

namespace asym {

namespace {

constexpr double kZero = 1e-12;
constexpr double kPrefixSlack = 1e-12;

double log2_safe(double x) { return std::log2(x); }

}  // namespace

SchmidtVector SchmidtVector::make(std::vector<double> p, const Tolerance& tol) {
  if (p.empty()) throw std::invalid_argument("Schmidt vector: empty");
  double s = 0.0;
  for (auto& x : p) {
    if (!std::isfinite(x) || x < -tol.neg_tol) throw std::invalid_argument("Schmidt vector: negative entry");
    x = std::max(0.0, x);
    s += x;
  }
  if (std::fabs(s - 1.0) > tol.mass_tol) throw std::invalid_argument("Schmidt vector: mass is not 1");
  std::sort(p.begin(), p.end(), std::greater<>());
  return SchmidtVector{std::move(p)};
}

bool majorizes(const SchmidtVector& p, const SchmidtVector& q) {
  const std::size_t n = std::max(p.probs.size(), q.probs.size());
  double sp = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += k < p.probs.size() ? p.probs[k] : 0.0;
    sq += k < q.probs.size() ? q.probs[k] : 0.0;
    if (sp < sq - kPrefixSlack) return false;
  }
  return true;
}

bool majorizes_hlp(const std::vector<Rational>& p_in, const std::vector<Rational>& q_in) {
  const std::size_t n = std::max(p_in.size(), q_in.size());
  if (n > 8) throw std::invalid_argument("majorizes_hlp: length above 8");
  std::vector<Rational> p(n, Rational(0)), q(n, Rational(0));
  std::copy(p_in.begin(), p_in.end(), p.begin());
  std::copy(q_in.begin(), q_in.end(), q.begin());
  // Unknowns d_ij (row-major): rows and columns sum to 1, sum_j d_ij p_j = q_i.
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(n * n, Rational(0)), col(n * n, Rational(0)), img(n * n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      row[i * n + j] = 1;
      col[j * n + i] = 1;
      img[i * n + j] = p[j];
    }
    a.push_back(std::move(row));
    b.emplace_back(1);
    a.push_back(std::move(col));
    b.emplace_back(1);
    a.push_back(std::move(img));
    b.push_back(q[i]);
  }
  return find_feasible_point(a, b).has_value();
}

bool majorizes_hlp(const SchmidtVector& p, const SchmidtVector& q) {
  auto exact = [](const std::vector<double>& v) {
    std::vector<Rational> r;
    Rational s(0);
    for (double x : v) {
      r.push_back(simplest_rational(x, kPrefixSlack, 1000000));
      s += r.back();
    }
    for (auto& x : r) x /= s;
    return r;
  };
  return majorizes_hlp(exact(p.probs), exact(q.probs));
}

bool nielsen_convertible(const SchmidtVector& psi, const SchmidtVector& phi) { return majorizes(phi, psi); }

Spectrum Spectrum::of(const std::vector<double>& eigenvalues) {
  std::vector<double> v = eigenvalues;
  std::sort(v.begin(), v.end(), std::greater<>());
  Spectrum sp;
  for (double x : v) {
    const double y = std::fabs(x) <= kZero ? 0.0 : x;
    if (y < 0.0) throw std::invalid_argument("spectrum: negative eigenvalue");
    if (!sp.levels.empty() && std::fabs(sp.levels.back().value - y) <= kZero * std::max(1.0, y))
      sp.levels.back().multiplicity += 1.0;
    else
      sp.levels.push_back({y, 1.0});
  }
  return sp;
}

Spectrum Spectrum::of(const DensityMatrix& rho) {
  const Eigen::VectorXd e = hermitian_eigenvalues(rho.rho);
  return of(std::vector<double>(e.data(), e.data() + e.size()));
}

Spectrum Spectrum::iid_power(const std::vector<double>& eigenvalues, int m) {
  if (m < 1) throw std::invalid_argument("spectrum: m must be >= 1");
  const Spectrum base = of(eigenvalues);
  Spectrum cur{{{1.0, 1.0}}};
  for (int i = 0; i < m; ++i) {
    std::vector<Level> next;
    for (const auto& a : cur.levels)
      for (const auto& b : base.levels) next.push_back({a.value * b.value, a.multiplicity * b.multiplicity});
    std::stable_sort(next.begin(), next.end(), [](const Level& x, const Level& y) { return x.value > y.value; });
    Spectrum merged;
    for (const auto& l : next) {
      if (!merged.levels.empty() &&
          std::fabs(merged.levels.back().value - l.value) <= 1e-12 * std::max(merged.levels.back().value, l.value))
        merged.levels.back().multiplicity += l.multiplicity;
      else
        merged.levels.push_back(l);
    }
    cur = std::move(merged);
  }
  return cur;
}

double Spectrum::mass() const {
  double s = 0.0;
  for (const auto& l : levels) s += l.value * l.multiplicity;
  return s;
}

Entropies entropies(const Spectrum& sp) {
  Entropies e;
  double rank = 0.0, top = 0.0;
  for (const auto& l : sp.levels) {
    if (l.value <= kZero) continue;
    e.s -= l.multiplicity * l.value * log2_safe(l.value);
    rank += l.multiplicity;
    top = std::max(top, l.value);
  }
  if (rank == 0.0) throw std::invalid_argument("entropies: zero spectrum");
  e.s = std::max(0.0, e.s);
  e.s_max = log2_safe(rank);
  e.s_min = std::max(0.0, -log2_safe(top));
  return e;
}

Entropies entropies(const DensityMatrix& rho) { return entropies(Spectrum::of(rho)); }

SmoothEntropies smooth_entropies(const Spectrum& sp_in, double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0)) throw std::invalid_argument("smooth_entropies: eps must be in [0, 1)");
  Spectrum sp = sp_in;
  std::stable_sort(sp.levels.begin(), sp.levels.end(), [](const auto& x, const auto& y) { return x.value > y.value; });
  const Entropies plain = entropies(sp);
  SmoothEntropies out;
  out.eps = eps;
  if (eps == 0.0) {
    out.s_max_upper = plain.s_max;
    out.s_min_lower = plain.s_min;
    out.s_max_kind = out.s_min_kind = BoundKind::exact;
    return out;
  }
  // Tail cut: smallest rank r whose top-r mass is >= 1 - eps.
  const double need = 1.0 - eps;
  double kept = 0.0, rank = 0.0;
  for (const auto& l : sp.levels) {
    if (l.value <= kZero) break;
    if (kept + l.value * l.multiplicity >= need) {
      rank += std::max(1.0, std::ceil((need - kept) / l.value));
      kept = need;
      break;
    }
    kept += l.value * l.multiplicity;
    rank += l.multiplicity;
  }
  out.s_max_upper = std::min(plain.s_max, log2_safe(std::max(rank, 1.0)));

  // Peak flatten: least cap t with removed(t) <= eps and room(t) >= removed(t).
  double dim = 0.0;
  for (const auto& l : sp.levels) dim += l.multiplicity;
  auto removed = [&](double t) {
    double r = 0.0;
    for (const auto& l : sp.levels) r += l.multiplicity * std::max(0.0, l.value - t);
    return r;
  };
  auto room = [&](double t) {
    double r = 0.0;
    for (const auto& l : sp.levels) r += l.multiplicity * std::max(0.0, t - l.value);
    return r;
  };
  auto ok = [&](double t) {
    const double r = removed(t);
    return r <= eps && r <= room(t) + 1e-15;
  };
  double hi = sp.levels.front().value, lo = 1.0 / dim;
  if (ok(lo)) {
    hi = lo;
  } else {
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (ok(mid)) hi = mid;
      else lo = mid;
    }
  }
  out.s_min_lower = std::max(plain.s_min, -log2_safe(hi));
  return out;
}

SmoothEntropies smooth_entropies(const DensityMatrix& rho, double eps) { return smooth_entropies(Spectrum::of(rho), eps); }

std::vector<EntropyRatePoint> iid_smooth_entropy_rates(const std::vector<double>& eigenvalues, const std::vector<int>& ms,
                                                       double eps) {
  std::vector<EntropyRatePoint> out;
  for (int m : ms) {
    const SmoothEntropies s = smooth_entropies(Spectrum::iid_power(eigenvalues, m), eps);
    out.push_back({m, s.s_max_upper / m, s.s_min_lower / m});
  }
  return out;
}

std::vector<CorrespondenceRow> correspondence_demo(int pairs, std::uint64_t seed, int max_levels) {
  if (pairs < 1 || max_levels < 1 || max_levels > 6) throw std::invalid_argument("correspondence_demo: invalid arguments");
  std::mt19937_64 rng(seed);
  auto random_dist = [&](int levels) {
    std::uniform_int_distribution<int> u(0, 4);
    std::vector<Rational> v(static_cast<std::size_t>(levels));
    Rational s(0);
    while (s == 0) {
      s = 0;
      for (auto& x : v) {
        x = u(rng);
        s += x;
      }
    }
    for (auto& x : v) x /= s;
    return RatSeq(0, std::move(v));
  };
  std::uniform_int_distribution<int> len(1, max_levels);
  std::vector<CorrespondenceRow> rows;
  for (int i = 0; i < pairs; ++i) {
    CorrespondenceRow r;
    r.id = i;
    r.q = random_dist(len(rng));
    r.p = i % 4 == 0 ? convolve(random_dist(2), r.q) : random_dist(len(rng));
    const RatDist p = RatDist::make_complete(r.p), q = RatDist::make_complete(r.q);
    r.rta_convertible = a_majorizes(p, q).holds;
    r.rta_predicate = a_majorizes_bruteforce(p, q).has_value();
    auto schmidt = [](const RatSeq& x) {
      std::vector<double> v;
      for (const auto& y : x.values()) v.push_back(to_double(y));
      return SchmidtVector::make(std::move(v));
    };
    auto sorted_exact = [](const RatSeq& x) {
      std::vector<Rational> v(x.values().begin(), x.values().end());
      std::sort(v.begin(), v.end(), std::greater<>());
      return v;
    };
    r.ent_convertible = nielsen_convertible(schmidt(r.p), schmidt(r.q));
    r.ent_predicate = majorizes_hlp(sorted_exact(r.q), sorted_exact(r.p));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace asym
