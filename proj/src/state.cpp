// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asym {
namespace {

double wrap_phase(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(t, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

void check_norm(const std::vector<Amplitude>& amps, const Tolerance& tol) {
  if (amps.empty()) throw std::invalid_argument("state: no amplitudes");
  double s = 0.0;
  for (const auto& a : amps) {
    if (!std::isfinite(a.modulus) || !std::isfinite(a.phase)) throw std::invalid_argument("state: non-finite amplitude");
    if (a.modulus < 0.0) throw std::invalid_argument("state: negative modulus");
    s += a.modulus * a.modulus;
  }
  if (std::fabs(s - 1.0) > tol.mass_tol) throw std::invalid_argument("state: not normalized within mass_tol");
}

}  // namespace

PureState PureState::from_polar(std::vector<Amplitude> amps, const Tolerance& tol) {
  check_norm(amps, tol);
  for (auto& a : amps) a.phase = a.modulus == 0.0 ? 0.0 : wrap_phase(a.phase);
  PureState s;
  s.amps_ = std::move(amps);
  return s;
}

PureState PureState::from_amplitudes(const std::vector<std::complex<double>>& amps, const Tolerance& tol) {
  std::vector<Amplitude> v;
  v.reserve(amps.size());
  for (const auto& z : amps) v.push_back({std::abs(z), std::arg(z)});
  return from_polar(std::move(v), tol);
}

PureState PureState::from_profile(const F64Seq& p, const std::vector<double>& phases, const Tolerance& tol) {
  if (p.empty()) throw std::invalid_argument("state: empty profile");
  if (p.lo() < 0) throw std::invalid_argument("state: profile has negative energies");
  std::vector<Amplitude> v(static_cast<std::size_t>(p.hi() + 1));
  for (Index n = 0; n <= p.hi(); ++n) {
    const double x = p(n);
    if (x < -tol.neg_tol) throw std::invalid_argument("state: negative profile entry");
    const auto i = static_cast<std::size_t>(n);
    v[i].modulus = std::sqrt(std::max(0.0, x));
    v[i].phase = i < phases.size() ? phases[i] : 0.0;
  }
  return from_polar(std::move(v), tol);
}

PureState PureState::from_exact_profile(const RatSeq& p, const std::vector<double>& phases) {
  if (p.empty() || sgn(p.values().front()) < 0) throw std::invalid_argument("state: invalid exact profile");
  RatDist::make_complete(p);
  PureState s = from_profile(to_f64(p), phases);
  s.exact_profile_ = p;
  return s;
}

std::complex<double> PureState::amplitude(Index n) const {
  if (n < 0 || n >= n_trunc()) return {0.0, 0.0};
  const auto& a = amps_[static_cast<std::size_t>(n)];
  return std::polar(a.modulus, a.phase);
}

std::vector<std::complex<double>> PureState::vector() const {
  std::vector<std::complex<double>> v(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) v[i] = std::polar(amps_[i].modulus, amps_[i].phase);
  return v;
}

PureState PureState::with_factor(PoissonFactor f) const {
  PureState s = *this;
  s.factor_ = std::move(f);
  return s;
}

PureState PureState::with_exact_profile(RatSeq p) const {
  PureState s = *this;
  s.exact_profile_ = std::move(p);
  return s;
}

bool PureState::canonical() const {
  for (const auto& a : amps_)
    if (a.phase != 0.0) return false;
  return true;
}

template <class T>
Distribution<T> poisson_mixture_distribution(const PoissonFactor& f, Index n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("poisson_mixture_distribution: n_trunc < 1");
  const Index wlo = f.mixing.lo();
  const Index len = n_trunc - wlo;
  if (len < 1) throw std::invalid_argument("poisson_mixture_distribution: truncation below mixing support");
  Distribution<T> base = poisson_distribution<T>(f.rate, len);
  Distribution<T> d;
  Seq<T> mix;
  if constexpr (BackendOf<T>::value == Backend::rational) mix = f.mixing;
  else mix = to_f64(f.mixing);
  d.seq = restrict_to(convolve(mix, base.seq), 0, n_trunc - 1);
  d.log_scale = base.log_scale;
  d.factor = f;
  if (base.complete() && f.mixing.hi() <= n_trunc - 1) {
    d.tail_mass = 0.0;
  } else {
    d.exact_until = n_trunc - 1;
    d.tail_mass = base.tail_mass;
  }
  return d;
}

RatSeq truncated_profile(const PureState& psi) {
  if (psi.exact_profile()) return *psi.exact_profile();
  std::vector<Rational> v(psi.amps().size());
  Rational total(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational m = to_rational(psi.amps()[i].modulus);
    v[i] = m * m;
    total += v[i];
  }
  for (auto& x : v) x /= total;
  return RatSeq(0, std::move(v));
}

template <class T>
Distribution<T> PureState::energy_distribution(const Tolerance& tol) const {
  if (factor_) return poisson_mixture_distribution<T>(*factor_, n_trunc());
  if constexpr (BackendOf<T>::value == Backend::rational) {
    return RatDist::make_complete(truncated_profile(*this));
  } else {
    std::vector<double> v(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) v[i] = amps_[i].modulus * amps_[i].modulus;
    return F64Dist::make_complete(F64Seq(0, std::move(v)), tol);
  }
}

PureState eigenstate(Index n) {
  if (n < 0) throw std::invalid_argument("eigenstate: negative level");
  std::vector<Amplitude> v(static_cast<std::size_t>(n + 1));
  v.back().modulus = 1.0;
  return PureState::from_polar(std::move(v)).with_exact_profile(RatSeq::delta(n));
}

PureState coherence_bit() {
  return PureState::from_exact_profile(RatSeq(0, {Rational(1, 2), Rational(1, 2)}));
}

PureState poisson_mixture_state(const Rational& rate, const RatSeq& mixing, Index n_trunc) {
  if (sgn(rate) < 0) throw std::invalid_argument("poisson_profile_state: negative rate");
  if (mixing.empty() || mixing.lo() < 0) throw std::invalid_argument("poisson_mixture_state: invalid mixing");
  for (const auto& x : mixing.values())
    if (sgn(x) < 0) throw std::invalid_argument("poisson_mixture_state: negative mixing weight");
  if (mass(mixing) != 1) throw std::invalid_argument("poisson_mixture_state: mixing mass must be 1");
  if (n_trunc <= 0) n_trunc = mixing.hi() + default_poisson_trunc(rate.get_d());
  const PoissonFactor f{rate, mixing};
  const F64Dist d = poisson_mixture_distribution<double>(f, n_trunc);
  std::vector<Amplitude> v(static_cast<std::size_t>(n_trunc));
  double s = 0.0;
  for (Index n = 0; n < n_trunc; ++n) s += d.seq(n);
  // Renormalize the truncated amplitudes; the tag keeps the exact profile.
  for (Index n = 0; n < n_trunc; ++n) v[static_cast<std::size_t>(n)].modulus = std::sqrt(std::max(0.0, d.seq(n)) / s);
  PureState st = PureState::from_polar(std::move(v));
  return st.with_factor(f);
}

PureState poisson_profile_state(const Rational& rate, Index n_trunc) {
  return poisson_mixture_state(rate, RatSeq::delta(0), n_trunc);
}

template Distribution<Rational> PureState::energy_distribution<Rational>(const Tolerance&) const;
template Distribution<double> PureState::energy_distribution<double>(const Tolerance&) const;
template Distribution<Rational> poisson_mixture_distribution<Rational>(const PoissonFactor&, Index);
template Distribution<double> poisson_mixture_distribution<double>(const PoissonFactor&, Index);

}  // namespace asym
