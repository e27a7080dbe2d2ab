// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/seq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "asym/kernels.hpp"

namespace asym {

const char* backend_name(Backend b) { return b == Backend::rational ? "rational" : "f64"; }

Backend parse_backend(std::string_view name) {
  if (name == "rational") return Backend::rational;
  if (name == "f64" || name == "float64") return Backend::f64;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

void Tolerance::validate() const {
  if (!(std::isfinite(neg_tol) && neg_tol >= 0.0) || !(std::isfinite(mass_tol) && mass_tol >= 0.0))
    throw std::invalid_argument("tolerances must be finite and nonnegative");
}

namespace {

template <class T>
bool is_zero(const T& x) {
  if constexpr (BackendOf<T>::value == Backend::rational) return sgn(x) == 0;
  else return x == 0.0;
}

template <class T>
T abs_value(const T& x) {
  if constexpr (BackendOf<T>::value == Backend::rational) return abs(x);
  else return std::fabs(x);
}

template <class T>
void check_unit_mass(const Seq<T>& p, const Tolerance& tol, const char* op) {
  T m = mass(p);
  if constexpr (BackendOf<T>::value == Backend::rational) {
    if (m != 1) throw std::invalid_argument(std::string(op) + ": input mass is not exactly 1");
  } else {
    if (std::fabs(m - 1.0) > tol.mass_tol)
      throw std::invalid_argument(std::string(op) + ": input mass deviates from 1 beyond mass_tol");
  }
}

}  // namespace

template <class T>
void Seq<T>::normalize() {
  std::size_t first = 0;
  while (first < values_.size() && is_zero(values_[first])) ++first;
  if (first == values_.size()) {
    values_.clear();
    offset_ = 0;
    return;
  }
  std::size_t last = values_.size();
  while (is_zero(values_[last - 1])) --last;
  if (first > 0 || last < values_.size()) {
    values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(last), values_.end());
    values_.erase(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(first));
  }
  offset_ += static_cast<Index>(first);
}

template <class T>
Seq<T> convolve(const Seq<T>& a, const Seq<T>& b) {
  if (a.empty() || b.empty()) return {};
  return convolve_window(a, b, a.lo() + b.lo(), a.hi() + b.hi());
}

template <class T>
Seq<T> convolve_window(const Seq<T>& a, const Seq<T>& b, Index lo, Index hi) {
  if (a.empty() || b.empty() || hi < lo) return {};
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<T> out(static_cast<std::size_t>(hi - lo + 1), T(0));
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (is_zero(av[i])) continue;
    // Output index of b entry j: a.lo + i + b.lo + j.
    const Index base = a.lo() + static_cast<Index>(i) + b.lo();
    const Index j0 = std::max<Index>(0, lo - base);
    const Index j1 = std::min<Index>(static_cast<Index>(bv.size()) - 1, hi - base);
    if (j1 < j0) continue;
    const std::size_t len = static_cast<std::size_t>(j1 - j0 + 1);
    T* dst = out.data() + (base + j0 - lo);
    const T* src = bv.data() + j0;
    if constexpr (BackendOf<T>::value == Backend::f64) {
      kernels::active().axpy(av[i], src, dst, len);
    } else {
      Rational tmp;
      for (std::size_t j = 0; j < len; ++j) {
        mpq_mul(tmp.get_mpq_t(), av[i].get_mpq_t(), src[j].get_mpq_t());
        mpq_add(dst[j].get_mpq_t(), dst[j].get_mpq_t(), tmp.get_mpq_t());
      }
    }
  }
  return Seq<T>(lo, std::move(out));
}

template <class T>
T partial_convolve(const Seq<T>& a, const Seq<T>& b, Index s, Index t, Index n) {
  if (s > t) throw std::invalid_argument("partial_convolve: s > t");
  T acc(0);
  if (a.empty() || b.empty()) return acc;
  const Index k0 = std::max({s, a.lo(), n - b.hi()});
  const Index k1 = std::min({t, a.hi(), n - b.lo()});
  for (Index k = k0; k <= k1; ++k) acc += a(k) * b(n - k);
  return acc;
}

template <class T>
PartialConvolution<T>::PartialConvolution(Seq<T> a, Seq<T> b, Index s, Index t)
    : a_(std::move(a)), b_(std::move(b)), s_(s), t_(t) {
  if (s > t) throw std::invalid_argument("partial_convolve: s > t");
}

template <class T>
Reciprocal<T> reciprocal(const Seq<T>& q, Index horizon, const Tolerance& tol) {
  if (q.empty()) throw std::invalid_argument("reciprocal: sequence is identically zero");
  if (horizon < 0) throw std::invalid_argument("reciprocal: negative horizon");
  const Index nstar = q.lo();
  const auto qv = q.values();
  const std::size_t len = static_cast<std::size_t>(horizon) + 1;
  std::vector<T> r(len, T(0));
  if constexpr (BackendOf<T>::value == Backend::f64) {
    if (std::fabs(qv[0]) < tol.neg_tol)
      throw std::invalid_argument("reciprocal: leading entry below neg_tol (ill-conditioned)");
    // qrev[j] = q(n* + len - 1 - j), zero beyond the support, so that
    // sum_{l<i} r[l] q(n* + i - l) is a forward dot against qrev + (len - 1 - i).
    std::vector<double> qrev(len, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
      const std::size_t src = len - 1 - j;
      if (src < qv.size()) qrev[j] = qv[src];
    }
    const double inv = 1.0 / qv[0];
    r[0] = inv;
    const auto& k = kernels::active();
    for (std::size_t i = 1; i < len; ++i) r[i] = -inv * k.dot(r.data(), qrev.data() + (len - 1 - i), i);
  } else {
    const Rational inv = 1 / qv[0];
    r[0] = inv;
    Rational acc, tmp;
    for (std::size_t i = 1; i < len; ++i) {
      acc = 0;
      const std::size_t lmin = i >= qv.size() ? i - (qv.size() - 1) : 0;
      for (std::size_t l = lmin; l < i; ++l) {
        mpq_mul(tmp.get_mpq_t(), r[l].get_mpq_t(), qv[i - l].get_mpq_t());
        mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), tmp.get_mpq_t());
      }
      r[i] = -inv * acc;
    }
  }
  Reciprocal<T> out;
  out.seq = Seq<T>(-nstar, std::move(r));
  out.window_lo = -nstar;
  out.window_hi = -nstar + horizon;
  out.identity_hi = horizon;
  return out;
}

template <class T>
Seq<T> shift(const Seq<T>& a, Index k) {
  if (a.empty()) return a;
  return Seq<T>(a.lo() + k, std::vector<T>(a.values().begin(), a.values().end()));
}

template <class T>
Seq<T> scale(const Seq<T>& a, const T& c) {
  std::vector<T> v(a.values().begin(), a.values().end());
  for (auto& x : v) x *= c;
  return Seq<T>(a.lo(), std::move(v));
}

namespace {

template <class T, class Op>
Seq<T> combine(const Seq<T>& a, const Seq<T>& b, Op op) {
  if (a.empty() && b.empty()) return {};
  const Index lo = a.empty() ? b.lo() : (b.empty() ? a.lo() : std::min(a.lo(), b.lo()));
  const Index hi = a.empty() ? b.hi() : (b.empty() ? a.hi() : std::max(a.hi(), b.hi()));
  std::vector<T> v(static_cast<std::size_t>(hi - lo + 1));
  for (Index n = lo; n <= hi; ++n) v[static_cast<std::size_t>(n - lo)] = op(a(n), b(n));
  return Seq<T>(lo, std::move(v));
}

}  // namespace

template <class T>
Seq<T> add(const Seq<T>& a, const Seq<T>& b) {
  return combine(a, b, [](const T& x, const T& y) { return T(x + y); });
}

template <class T>
Seq<T> subtract(const Seq<T>& a, const Seq<T>& b) {
  return combine(a, b, [](const T& x, const T& y) { return T(x - y); });
}

template <class T>
Seq<T> restrict_to(const Seq<T>& a, Index lo, Index hi) {
  if (a.empty() || hi < lo) return {};
  const Index l = std::max(lo, a.lo());
  const Index h = std::min(hi, a.hi());
  if (h < l) return {};
  const auto v = a.values();
  return Seq<T>(l, std::vector<T>(v.begin() + (l - a.lo()), v.begin() + (h - a.lo() + 1)));
}

template <class T>
T mass(const Seq<T>& a) {
  T s(0);
  for (const auto& x : a.values()) s += x;
  return s;
}

template <class T>
T mean(const Seq<T>& a) {
  T s(0);
  Index n = a.lo();
  for (const auto& x : a.values()) s += T(static_cast<long>(n++)) * x;
  return s / mass(a);
}

template <class T>
T variance(const Seq<T>& a) {
  const T mu = mean(a);
  T s(0);
  Index n = a.lo();
  for (const auto& x : a.values()) {
    const T d = T(static_cast<long>(n++)) - mu;
    s += d * d * x;
  }
  return s / mass(a);
}

template <class T>
T min_entry(const Seq<T>& a) {
  if (a.empty()) return T(0);
  if constexpr (BackendOf<T>::value == Backend::f64) {
    return kernels::active().min_value(a.values().data(), a.size());
  } else {
    return *std::min_element(a.values().begin(), a.values().end());
  }
}

template <class T>
T tv_distance(const Seq<T>& p, const Seq<T>& q, const Tolerance& tol) {
  check_unit_mass(p, tol, "tv_distance");
  check_unit_mass(q, tol, "tv_distance");
  if (p.empty() && q.empty()) return T(0);
  const Index lo = p.empty() ? q.lo() : (q.empty() ? p.lo() : std::min(p.lo(), q.lo()));
  const Index hi = p.empty() ? q.hi() : (q.empty() ? p.hi() : std::max(p.hi(), q.hi()));
  if constexpr (BackendOf<T>::value == Backend::f64) {
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> a(len, 0.0), b(len, 0.0);
    std::copy(p.values().begin(), p.values().end(), a.begin() + (p.lo() - lo));
    std::copy(q.values().begin(), q.values().end(), b.begin() + (q.lo() - lo));
    return 0.5 * kernels::active().abs_diff_sum(a.data(), b.data(), len);
  } else {
    Rational s(0);
    for (Index n = lo; n <= hi; ++n) s += abs_value(T(p(n) - q(n)));
    return s / 2;
  }
}

template <class T>
double bhattacharyya(const Seq<T>& p, const Seq<T>& q, const Tolerance& tol) {
  check_unit_mass(p, tol, "bhattacharyya");
  check_unit_mass(q, tol, "bhattacharyya");
  if (p.empty() || q.empty()) return 0.0;
  const Index lo = std::max(p.lo(), q.lo());
  const Index hi = std::min(p.hi(), q.hi());
  if (hi < lo) return 0.0;
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> a(len), b(len);
  for (Index n = lo; n <= hi; ++n) {
    const double x = to_double(p(n));
    const double y = to_double(q(n));
    if (x < -tol.neg_tol || y < -tol.neg_tol)
      throw std::invalid_argument("bhattacharyya: negative entry beyond neg_tol");
    a[static_cast<std::size_t>(n - lo)] = std::max(x, 0.0);
    b[static_cast<std::size_t>(n - lo)] = std::max(y, 0.0);
  }
  return std::min(1.0, kernels::active().sqrt_prod_sum(a.data(), b.data(), len));
}

F64Seq to_f64(const RatSeq& a) {
  std::vector<double> v;
  v.reserve(a.size());
  for (const auto& x : a.values()) v.push_back(x.get_d());
  return F64Seq(a.lo(), std::move(v));
}

RatSeq to_rational(const F64Seq& a) {
  std::vector<Rational> v;
  v.reserve(a.size());
  for (double x : a.values()) v.push_back(to_rational(x));
  return RatSeq(a.lo(), std::move(v));
}

#define ASYM_INSTANTIATE(T)                                                        \
  template class Seq<T>;                                                           \
  template class PartialConvolution<T>;                                            \
  template Seq<T> convolve(const Seq<T>&, const Seq<T>&);                          \
  template Seq<T> convolve_window(const Seq<T>&, const Seq<T>&, Index, Index);     \
  template T partial_convolve(const Seq<T>&, const Seq<T>&, Index, Index, Index);  \
  template Reciprocal<T> reciprocal(const Seq<T>&, Index, const Tolerance&);       \
  template Seq<T> shift(const Seq<T>&, Index);                                     \
  template Seq<T> scale(const Seq<T>&, const T&);                                  \
  template Seq<T> add(const Seq<T>&, const Seq<T>&);                               \
  template Seq<T> subtract(const Seq<T>&, const Seq<T>&);                          \
  template Seq<T> restrict_to(const Seq<T>&, Index, Index);                        \
  template T mass(const Seq<T>&);                                                  \
  template T mean(const Seq<T>&);                                                  \
  template T variance(const Seq<T>&);                                              \
  template T min_entry(const Seq<T>&);                                             \
  template T tv_distance(const Seq<T>&, const Seq<T>&, const Tolerance&);          \
  template double bhattacharyya(const Seq<T>&, const Seq<T>&, const Tolerance&);

ASYM_INSTANTIATE(Rational)
ASYM_INSTANTIATE(double)

#undef ASYM_INSTANTIATE

}  // namespace asym
