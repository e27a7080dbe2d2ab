// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/amajor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asym/lp.hpp"

namespace asym {
namespace {

constexpr Index kMaxBruteforceLevels = 16;

template <class T>
bool is_point_mass(const Distribution<T>& d) {
  return d.complete() && d.seq.size() == 1;
}

template <class T>
bool has_positive_rate(const Distribution<T>& d) {
  return d.factor && sgn(d.factor->rate) > 0;
}

// Verdict implied by the distributions' analytic structure, if any.
//  - q a point mass: p * q~ is a shift of p.
//  - q = shift(P_s): p * q~ = shift(mixing_p * P_{r - s}), nonnegative iff
//    r >= s; a complete p has no Poisson factor and always fails.
//  - p finite and q of infinite support: p cannot be a mixture of shifts of q.
//  - p = shift(P_r) and q finite but not a point mass, or q = w * P_s with w
//    not a point mass: the witness generating function has a pole off the
//    positive real axis, which a nonnegative power series cannot have.
template <class T>
std::optional<std::pair<bool, std::string>> structural_certificate(const Distribution<T>& p,
                                                                   const Distribution<T>& q) {
  if (is_point_mass(q)) return std::pair{true, std::string("q is a point mass")};
  if (has_positive_rate(q) && q.factor->is_shifted_poisson()) {
    if (p.factor) return std::pair{p.factor->rate >= q.factor->rate, std::string("Poisson rates compared")};
    if (p.complete()) return std::pair{false, std::string("finite p against Poisson q")};
  }
  if (p.complete() && has_positive_rate(q)) return std::pair{false, std::string("finite p against infinite q")};
  if (has_positive_rate(p) && p.factor->is_shifted_poisson()) {
    if (q.complete() && q.seq.size() > 1) return std::pair{false, std::string("Poisson p against finite q")};
    if (q.factor && !q.factor->is_shifted_poisson())
      return std::pair{false, std::string("Poisson p against Poisson mixture q")};
  }
  return std::nullopt;
}

}  // namespace

template <class T>
std::optional<std::pair<bool, std::string>> structural_verdict(const Distribution<T>& p, const Distribution<T>& q) {
  return structural_certificate(p, q);
}

namespace {

template <class T>
bool residual_vanishes(const Seq<T>& p, const Seq<T>& w, const Seq<T>& q, const Tolerance& tol) {
  const Seq<T> r = subtract(p, convolve(w, q));
  if constexpr (BackendOf<T>::value == Backend::rational) {
    return r.empty();
  } else {
    for (double x : r.values())
      if (std::fabs(x) > tol.mass_tol) return false;
    return true;
  }
}

}  // namespace

template <class T>
AMajorVerdict<T> a_majorizes(const Distribution<T>& p, const Distribution<T>& q, const AMajorOptions& opts) {
  const Tolerance tol = Tolerance::for_backend<T>(opts.tol);
  tol.validate();
  if (p.seq.empty() || q.seq.empty()) throw std::invalid_argument("a_majorizes: empty distribution");
  if (opts.extension < 0) throw std::invalid_argument("a_majorizes: negative window extension");
  const Index nq = q.seq.lo();
  const bool both_complete = p.complete() && q.complete();

  AMajorVerdict<T> v;
  v.window_lo = p.seq.lo() - nq;
  Index whi;
  if (both_complete) {
    // Any witness is supported on [min p - min q, max p - max q].
    whi = std::max(p.seq.hi() - q.seq.hi(), v.window_lo);
  } else {
    whi = p.valid_hi() - nq + (p.complete() ? opts.extension : 0);
    if (!q.complete()) whi = std::min(whi, q.valid_hi() + p.seq.lo() - 2 * nq);
    if (whi < v.window_lo)
      throw std::invalid_argument("a_majorizes: truncation of q too short to cover min supp(p) - n*(q)");
  }
  v.window_hi = whi;

  const Reciprocal<T> rq = reciprocal(q.seq, whi - p.seq.lo() + nq, tol);
  const Seq<T> w = convolve_window(p.seq, rq.seq, v.window_lo, whi);
  v.witness_log_scale = p.log_scale - q.log_scale;
  const double scale = std::exp(v.witness_log_scale);
  const T wmin = min_entry(w);
  const double min_prob = std::min(0.0, to_double(wmin) * scale);
  bool nonneg;
  if constexpr (BackendOf<T>::value == Backend::rational) {
    nonneg = sgn(wmin) >= 0;
  } else {
    const double slack = tol.neg_tol + p.tail_mass + q.tail_mass;
    nonneg = min_prob >= -slack;
    v.marginal = nonneg && min_prob < 0.0;
  }
  v.min_violation = min_prob;
  v.window_holds = nonneg;

  if (both_complete) {
    v.certified = true;
    if (p.seq.hi() - q.seq.hi() < v.window_lo) {
      v.holds = false;
      v.certificate = "support of p narrower than support of q";
      return v;
    }
    if (!nonneg) {
      v.holds = false;
      v.certificate = "negative entry of p * q~";
      return v;
    }
    if (!residual_vanishes(p.seq, w, q.seq, tol)) {
      v.holds = false;
      v.certificate = "q does not divide p";
      return v;
    }
    v.holds = true;
    v.witness = w;
    v.witness_complete = true;
    v.certificate = "finite quotient";
    return v;
  }

  if (!nonneg) {
    v.holds = false;
    v.certified = true;
    v.certificate = "negative entry of p * q~";
    return v;
  }
  if (auto c = structural_certificate(p, q)) {
    v.holds = c->first;
    v.certified = true;
    v.certificate = c->second;
  } else {
    v.holds = true;
    v.certificate = "window only";
  }
  if (v.holds) v.witness = w;
  return v;
}

template <class T>
std::optional<RatSeq> a_majorizes_bruteforce(const Distribution<T>& p, const Distribution<T>& q) {
  if (!p.complete() || !q.complete()) throw std::invalid_argument("a_majorizes_bruteforce: complete distributions only");
  if (p.seq.empty() || q.seq.empty()) throw std::invalid_argument("a_majorizes_bruteforce: empty distribution");
  if (static_cast<Index>(p.seq.size()) > kMaxBruteforceLevels || static_cast<Index>(q.seq.size()) > kMaxBruteforceLevels)
    throw std::invalid_argument("a_majorizes_bruteforce: support larger than 16 levels");
  auto exact = [](const Distribution<T>& d) {
    RatSeq s = to_rational(d.seq);
    return scale(s, Rational(1 / mass(s)));
  };
  const RatSeq pe = exact(p);
  const RatSeq qe = exact(q);
  const Index k0 = pe.lo() - qe.hi();
  const Index k1 = pe.hi() - qe.lo();
  const Index n0 = std::min(pe.lo(), k0 + qe.lo());
  const Index n1 = std::max(pe.hi(), k1 + qe.hi());
  const auto nk = static_cast<std::size_t>(k1 - k0 + 1);
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (Index n = n0; n <= n1; ++n) {
    std::vector<Rational> row(nk);
    for (Index k = k0; k <= k1; ++k) row[static_cast<std::size_t>(k - k0)] = qe(n - k);
    a.push_back(std::move(row));
    b.push_back(pe(n));
  }
  a.emplace_back(nk, Rational(1));
  b.emplace_back(1);
  auto x = find_feasible_point(a, b);
  if (!x) return std::nullopt;
  return RatSeq(k0, std::move(*x));
}

template <class T>
std::optional<Index> mutual_implies_shift(const Distribution<T>& p, const Distribution<T>& q, const AMajorOptions& opts) {
  const auto pq = a_majorizes(p, q, opts);
  if (!pq.holds) return std::nullopt;
  const auto qp = a_majorizes(q, p, opts);
  if (!qp.holds) return std::nullopt;
  const Index k = p.seq.lo() - q.seq.lo();
  if (p.factor && q.factor) {
    if (p.factor->rate != q.factor->rate || p.factor->mixing != shift(q.factor->mixing, k)) return std::nullopt;
    return k;
  }
  const Index hi = std::min(p.valid_hi(), q.valid_hi() + k);
  const Seq<T> a = restrict_to(p.seq, p.seq.lo(), hi);
  const Seq<T> b = restrict_to(shift(q.seq, k), p.seq.lo(), hi);
  if constexpr (BackendOf<T>::value == Backend::rational) {
    if (a != b || p.log_scale != q.log_scale) return std::nullopt;
  } else {
    const Tolerance tol = opts.tol;
    const F64Seq d = subtract(scale(a, std::exp(p.log_scale)), scale(b, std::exp(q.log_scale)));
    for (double x : d.values())
      if (std::fabs(x) > tol.mass_tol) return std::nullopt;
  }
  return k;
}

template AMajorVerdict<Rational> a_majorizes(const Distribution<Rational>&, const Distribution<Rational>&,
                                             const AMajorOptions&);
template AMajorVerdict<double> a_majorizes(const Distribution<double>&, const Distribution<double>&,
                                           const AMajorOptions&);
template std::optional<RatSeq> a_majorizes_bruteforce(const Distribution<Rational>&, const Distribution<Rational>&);
template std::optional<RatSeq> a_majorizes_bruteforce(const Distribution<double>&, const Distribution<double>&);
template std::optional<std::pair<bool, std::string>> structural_verdict(const Distribution<Rational>&,
                                                                        const Distribution<Rational>&);
template std::optional<std::pair<bool, std::string>> structural_verdict(const Distribution<double>&,
                                                                        const Distribution<double>&);
template std::optional<Index> mutual_implies_shift(const Distribution<Rational>&, const Distribution<Rational>&,
                                                   const AMajorOptions&);
template std::optional<Index> mutual_implies_shift(const Distribution<double>&, const Distribution<double>&,
                                                   const AMajorOptions&);

}  // namespace asym
