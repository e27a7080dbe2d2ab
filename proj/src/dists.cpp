// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/dists.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace asym {

template <class T>
F64Seq Distribution<T>::probabilities() const {
  F64Seq p = to_f64(seq);
  if (log_scale == 0.0) return p;
  return scale(p, std::exp(log_scale));
}

template <class T>
Distribution<T> Distribution<T>::make_complete(Seq<T> s, const Tolerance& tol) {
  if (s.empty()) throw std::invalid_argument("distribution: zero sequence");
  std::vector<T> v(s.values().begin(), s.values().end());
  for (auto& x : v) {
    if constexpr (BackendOf<T>::value == Backend::rational) {
      if (sgn(x) < 0) throw std::invalid_argument("distribution: negative entry");
    } else {
      if (!std::isfinite(x)) throw std::invalid_argument("distribution: non-finite entry");
      if (x < -tol.neg_tol) throw std::invalid_argument("distribution: negative entry beyond neg_tol");
      if (x < 0.0) x = 0.0;
    }
  }
  Distribution d;
  d.seq = Seq<T>(s.lo(), std::move(v));
  const T m = mass(d.seq);
  if constexpr (BackendOf<T>::value == Backend::rational) {
    if (m != 1) throw std::invalid_argument("distribution: mass is not exactly 1");
  } else {
    if (std::fabs(m - 1.0) > tol.mass_tol) throw std::invalid_argument("distribution: mass deviates from 1");
  }
  return d;
}

Index default_poisson_trunc(double rate) {
  const double r = std::fabs(rate);
  return static_cast<Index>(std::ceil(r + 12.0 * std::sqrt(r) + 30.0));
}

F64Seq poisson(double rate, Index n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("poisson: n_trunc must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(n_trunc));
  if (rate == 0.0) {
    v[0] = 1.0;
    return F64Seq(0, std::move(v));
  }
  const double r = std::fabs(rate);
  const double lr = std::log(r);
  for (Index n = 0; n < n_trunc; ++n) {
    const double mag = std::exp(-rate + static_cast<double>(n) * lr - std::lgamma(static_cast<double>(n) + 1.0));
    v[static_cast<std::size_t>(n)] = (rate < 0.0 && (n & 1)) ? -mag : mag;
  }
  return F64Seq(0, std::move(v));
}

RatSeq poisson_kernel(const Rational& rate, Index n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("poisson_kernel: n_trunc must be >= 1");
  std::vector<Rational> v(static_cast<std::size_t>(n_trunc));
  v[0] = 1;
  for (Index n = 1; n < n_trunc; ++n) {
    v[static_cast<std::size_t>(n)] = v[static_cast<std::size_t>(n - 1)] * rate / Rational(static_cast<long>(n));
  }
  return RatSeq(0, std::move(v));
}

double poisson_tail(double rate, Index n_trunc) {
  if (rate < 0.0) throw std::invalid_argument("poisson_tail: negative rate");
  if (rate == 0.0) return n_trunc <= 0 ? 1.0 : 0.0;
  if (n_trunc <= 0) return 1.0;
  // Terms past the mode decrease geometrically; below the mode use the complement.
  const double lr = std::log(rate);
  auto term = [&](Index n) {
    return std::exp(-rate + static_cast<double>(n) * lr - std::lgamma(static_cast<double>(n) + 1.0));
  };
  if (static_cast<double>(n_trunc) <= rate) {
    double head = 0.0;
    for (Index n = 0; n < n_trunc; ++n) head += term(n);
    return std::max(0.0, 1.0 - head);
  }
  double s = 0.0;
  for (Index n = n_trunc;; ++n) {
    const double t = term(n);
    s += t;
    if (t <= s * 1e-17 || t < 1e-320) break;
  }
  return s;
}

template <class T>
Distribution<T> poisson_distribution(const Rational& rate, Index n_trunc) {
  if (sgn(rate) < 0) throw std::invalid_argument("poisson_distribution: negative rate");
  const double r = rate.get_d();
  if (n_trunc <= 0) n_trunc = default_poisson_trunc(r);
  Distribution<T> d;
  if constexpr (BackendOf<T>::value == Backend::rational) {
    d.seq = poisson_kernel(rate, n_trunc);
    d.log_scale = -r;
  } else {
    d.seq = poisson(r, n_trunc);
  }
  d.tail_mass = poisson_tail(r, n_trunc);
  d.exact_until = n_trunc - 1;
  d.factor = PoissonFactor{rate, RatSeq::delta(0)};
  if (sgn(rate) == 0) {
    d.exact_until.reset();
    d.tail_mass = 0.0;
  }
  return d;
}

F64Dist translated_poisson(double mu, double sigma2, Index n_trunc) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("translated_poisson: sigma2 < 0");
  const double base = mu - sigma2;
  const double s = std::floor(base);
  const Rational rate = to_rational(sigma2) + (to_rational(base) - to_rational(s));
  F64Dist d = poisson_distribution<double>(rate, n_trunc);
  const auto k = static_cast<Index>(s);
  d.seq = shift(d.seq, k);
  if (d.exact_until) *d.exact_until += k;
  d.factor = PoissonFactor{rate, RatSeq::delta(k)};
  return d;
}

template <class T>
Distribution<T> iid_power(const Distribution<T>& p, int m) {
  if (m < 1) throw std::invalid_argument("iid_power: m must be >= 1");
  auto mul = [](const Distribution<T>& a, const Distribution<T>& b) {
    Distribution<T> c;
    c.seq = convolve(a.seq, b.seq);
    c.log_scale = a.log_scale + b.log_scale;
    if (a.complete() && b.complete()) return c;
    // An entry at n is exact while every contributing pair is exact.
    const Index ea = a.valid_hi() + b.seq.lo();
    const Index eb = b.valid_hi() + a.seq.lo();
    const Index e = a.complete() ? eb : (b.complete() ? ea : std::min(ea, eb));
    c.seq = restrict_to(c.seq, c.seq.lo(), e);
    c.exact_until = e;
    c.tail_mass = std::min(1.0, a.tail_mass + b.tail_mass);
    return c;
  };
  Distribution<T> result;
  bool have = false;
  Distribution<T> base = p;
  base.factor.reset();
  for (int e = m; e > 0; e >>= 1) {
    if (e & 1) {
      result = have ? mul(result, base) : base;
      have = true;
    }
    if (e > 1) base = mul(base, base);
  }
  if (p.factor) {
    RatSeq w = RatSeq::delta(0);
    for (int i = 0; i < m; ++i) w = convolve(w, p.factor->mixing);
    result.factor = PoissonFactor{p.factor->rate * m, w};
  }
  if (result.complete()) result.tail_mass = 0.0;
  return result;
}

F64Dist reduce_spectrum(const GeneralSpectrum& g, const Tolerance& tol) {
  if (!(g.period > 0.0) || !std::isfinite(g.period)) throw std::invalid_argument("reduce_spectrum: period must be > 0");
  if (g.levels.empty()) throw std::invalid_argument("reduce_spectrum: no levels");
  std::vector<SpectrumLevel> occ;
  for (const auto& l : g.levels) {
    if (!std::isfinite(l.energy) || !std::isfinite(l.weight))
      throw std::invalid_argument("reduce_spectrum: non-finite level");
    if (l.weight < -tol.neg_tol) throw std::invalid_argument("reduce_spectrum: negative weight");
    if (l.weight > 0.0) occ.push_back(l);
  }
  if (occ.empty()) throw std::invalid_argument("reduce_spectrum: zero total weight");
  std::stable_sort(occ.begin(), occ.end(),
                   [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.energy < b.energy; });
  const double e0 = occ.front().energy;
  const double unit = 2.0 * std::numbers::pi / g.period;
  std::map<Index, double> merged;
  for (const auto& l : occ) {
    const double x = (l.energy - e0) / unit;
    const double n = std::round(x);
    if (std::fabs(x - n) > tol.mass_tol + 1e-9 * std::max(1.0, std::fabs(x)))
      throw std::invalid_argument("reduce_spectrum: gap is not a multiple of 2pi/period");
    merged[static_cast<Index>(n)] += l.weight;
  }
  std::vector<double> v(static_cast<std::size_t>(merged.rbegin()->first + 1), 0.0);
  for (const auto& [n, w] : merged) v[static_cast<std::size_t>(n)] = w;
  return F64Dist::make_complete(F64Seq(0, std::move(v)), tol);
}

double barbour_bound(const BarbourParams& params, int m) {
  if (!(params.a > 0.0) || !(params.b > 0.0) || !(params.c >= 0.0))
    throw std::invalid_argument("barbour_bound: need a > 0, b > 0, c >= 0");
  const double mb = static_cast<double>(m) * params.b;
  if (!(mb > 0.5)) throw std::invalid_argument("barbour_bound: requires m b > 1/2");
  return params.c / std::sqrt(mb - 0.5) + 2.0 / (static_cast<double>(m) * params.a);
}

BarbourTerms barbour_terms(const F64Seq& pmf) {
  if (pmf.empty()) throw std::invalid_argument("barbour_terms: empty pmf");
  BarbourTerms t;
  t.mean = mean(pmf);
  t.variance = variance(pmf);
  // d_TV(L(Z), L(Z+1)) = (1/2) sum_n |p(n) - p(n-1)|
  double d = 0.0;
  for (Index n = pmf.lo(); n <= pmf.hi() + 1; ++n) d += std::fabs(pmf(n) - pmf(n - 1));
  t.v = std::min(0.5, 1.0 - 0.5 * d);
  double ez2 = 0.0, ez12 = 0.0, ez3 = 0.0;
  for (Index n = pmf.lo(); n <= pmf.hi(); ++n) {
    const double z = static_cast<double>(n);
    const double w = pmf(n);
    ez2 += w * z * (z - 1.0);
    ez12 += w * (z - 1.0) * (z - 2.0);
    ez3 += w * std::fabs(z * (z - 1.0) * (z - 2.0));
  }
  t.psi = t.variance * ez2 + std::fabs(t.mean - t.variance) * ez12 + ez3;
  return t;
}

BarbourParams barbour_params_iid(const F64Seq& pmf) {
  const BarbourTerms t = barbour_terms(pmf);
  if (!(t.variance > 0.0)) throw std::invalid_argument("barbour_params_iid: zero variance");
  if (!(t.v > 0.0)) throw std::invalid_argument("barbour_params_iid: v = 0 (lattice-periodic factor)");
  return {t.variance, t.v, t.psi / t.variance};
}

double poisson_comparison_bound(double sigma2, double sigma2p) {
  if (!(sigma2 >= 0.0) || !(sigma2p >= 0.0)) throw std::invalid_argument("poisson_comparison_bound: negative variance");
  const double x = std::fabs(sigma2 - sigma2p);
  const double s = std::sqrt(std::min(sigma2, sigma2p));
  return std::min(x, std::sqrt(2.0 / std::numbers::e) * (std::sqrt(s * s + x) - s));
}

template struct Distribution<Rational>;
template struct Distribution<double>;
template Distribution<Rational> poisson_distribution<Rational>(const Rational&, Index);
template Distribution<double> poisson_distribution<double>(const Rational&, Index);
template Distribution<Rational> iid_power(const Distribution<Rational>&, int);
template Distribution<double> iid_power(const Distribution<double>&, int);

}  // namespace asym
