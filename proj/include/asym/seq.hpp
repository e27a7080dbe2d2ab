// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asym/rational.hpp"

namespace asym {

using Index = std::int64_t;

enum class Backend { rational, f64 };

const char* backend_name(Backend b);
Backend parse_backend(std::string_view name);

template <class T>
struct BackendOf;
template <>
struct BackendOf<Rational> {
  static constexpr Backend value = Backend::rational;
};
template <>
struct BackendOf<double> {
  static constexpr Backend value = Backend::f64;
};

// Numerical slack for the float backend. The exact backend always uses zero.
struct Tolerance {
  double neg_tol = 1e-10;
  double mass_tol = 1e-9;

  static Tolerance exact() { return {0.0, 0.0}; }
  template <class T>
  static Tolerance for_backend(const Tolerance& requested = {}) {
    if constexpr (BackendOf<T>::value == Backend::rational) return exact();
    else return requested;
  }
  void validate() const;
};

// Finitely supported sequence over the integers. Stored entries span
// [offset, offset + size); the first and last stored entries are nonzero,
// so structural equality is mathematical equality. The empty sequence is
// the zero sequence and has offset 0.
template <class T>
class Seq {
 public:
  using value_type = T;

  Seq() = default;
  Seq(Index offset, std::vector<T> values) : offset_(offset), values_(std::move(values)) {
    normalize();
  }

  static Seq delta(Index k) { return Seq(k, std::vector<T>{T(1)}); }

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  Index lo() const { return offset_; }
  // Last stored index; lo() - 1 for the empty sequence.
  Index hi() const { return offset_ + static_cast<Index>(values_.size()) - 1; }
  std::span<const T> values() const { return values_; }

  T operator()(Index n) const {
    if (n < offset_ || n > hi()) return T(0);
    return values_[static_cast<std::size_t>(n - offset_)];
  }

  bool operator==(const Seq& other) const {
    return offset_ == other.offset_ && values_ == other.values_;
  }

 private:
  void normalize();

  Index offset_ = 0;
  std::vector<T> values_;
};

using RatSeq = Seq<Rational>;
using F64Seq = Seq<double>;

template <class T>
Seq<T> convolve(const Seq<T>& a, const Seq<T>& b);

// Entries of a*b restricted to indices [lo, hi].
template <class T>
Seq<T> convolve_window(const Seq<T>& a, const Seq<T>& b, Index lo, Index hi);

// sum_{k=s}^{t} a(k) b(n-k). Throws when s > t.
template <class T>
T partial_convolve(const Seq<T>& a, const Seq<T>& b, Index s, Index t, Index n);

// n -> [a*b]_s^t(n), holding copies of the operands.
template <class T>
class PartialConvolution {
 public:
  PartialConvolution(Seq<T> a, Seq<T> b, Index s, Index t);
  T operator()(Index n) const { return partial_convolve(a_, b_, s_, t_, n); }

 private:
  Seq<T> a_, b_;
  Index s_, t_;
};

// Windowed convolution inverse. seq holds q~ on [-n*, -n* + horizon] where
// n* is the first nonzero index of q; (q~ * q)(n) = delta_{0,n} holds exactly
// (rational) for every n <= identity_hi.
template <class T>
struct Reciprocal {
  Seq<T> seq;
  Index window_lo = 0;
  Index window_hi = 0;
  Index identity_hi = 0;
};

template <class T>
Reciprocal<T> reciprocal(const Seq<T>& q, Index horizon, const Tolerance& tol = {});

template <class T>
Seq<T> shift(const Seq<T>& a, Index k);

template <class T>
Seq<T> scale(const Seq<T>& a, const T& c);

template <class T>
Seq<T> add(const Seq<T>& a, const Seq<T>& b);

template <class T>
Seq<T> subtract(const Seq<T>& a, const Seq<T>& b);

// Entries on [lo, hi] only.
template <class T>
Seq<T> restrict_to(const Seq<T>& a, Index lo, Index hi);

template <class T>
T mass(const Seq<T>& a);
template <class T>
T mean(const Seq<T>& a);
template <class T>
T variance(const Seq<T>& a);

// Smallest entry, or 0 for the empty sequence.
template <class T>
T min_entry(const Seq<T>& a);

// (1/2) sum |p - q|. Both inputs must have unit mass within mass_tol.
template <class T>
T tv_distance(const Seq<T>& p, const Seq<T>& q, const Tolerance& tol = {});

// sum sqrt(p q) for nonnegative unit-mass inputs.
template <class T>
double bhattacharyya(const Seq<T>& p, const Seq<T>& q, const Tolerance& tol = {});

F64Seq to_f64(const RatSeq& a);
inline const F64Seq& to_f64(const F64Seq& a) { return a; }
RatSeq to_rational(const F64Seq& a);
inline const RatSeq& to_rational(const RatSeq& a) { return a; }

template <class T>
Seq<T> convert_seq(const F64Seq& a) {
  if constexpr (BackendOf<T>::value == Backend::rational) return to_rational(a);
  else return a;
}

}  // namespace asym
