// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace asym {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr double kStructuralTol = 1e-12;
constexpr double kSampledTol = 1e-9;
constexpr double kSampleTimes[] = {0.1, 0.7, std::numbers::pi, 2.3};

std::vector<Index> ladder(Index n) {
  std::vector<Index> e(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = i;
  return e;
}

Eigen::MatrixXcd time_evolution(const std::vector<Index>& energies, double t) {
  const Index d = static_cast<Index>(energies.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    u(i, i) = std::polar(1.0, -t * static_cast<double>(energies[static_cast<std::size_t>(i)]));
  return u;
}

Eigen::MatrixXcd random_density(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(d, 2);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < 2; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Eigen::MatrixXcd apply_ops(const std::vector<Eigen::MatrixXcd>& ops, const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& k : ops) out.noalias() += k * rho * k.adjoint();
  return out;
}

bool choi_structural(const KrausChannel& e) {
  const Index din = static_cast<Index>(e.in_energies.size());
  const Index dout = static_cast<Index>(e.out_energies.size());
  const Index dim = din * dout;
  Eigen::MatrixXcd v(dim, static_cast<Index>(e.ops.size()));
  for (std::size_t c = 0; c < e.ops.size(); ++c)
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a) v(i * dout + a, static_cast<Index>(c)) = e.ops[c](a, i);
  const Eigen::MatrixXcd j = v * v.adjoint();
  for (Index i = 0; i < din; ++i)
    for (Index a = 0; a < dout; ++a)
      for (Index i2 = 0; i2 < din; ++i2)
        for (Index a2 = 0; a2 < dout; ++a2) {
          if (std::abs(j(i * dout + a, i2 * dout + a2)) <= kStructuralTol) continue;
          const Index de_out = e.out_energies[static_cast<std::size_t>(a)] - e.out_energies[static_cast<std::size_t>(a2)];
          const Index de_in = e.in_energies[static_cast<std::size_t>(i)] - e.in_energies[static_cast<std::size_t>(i2)];
          if (de_out != de_in) return false;
        }
  return true;
}

template <class ApplyFn>
void sampled_check(const std::vector<Index>& in_e, const std::vector<Index>& out_e, ApplyFn&& apply_fn, int samples,
                   std::uint64_t seed, CovarianceReport& r) {
  std::mt19937_64 rng(seed);
  r.max_sampled_deviation = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::MatrixXcd rho = random_density(static_cast<Index>(in_e.size()), rng);
    const Eigen::MatrixXcd out = apply_fn(rho);
    for (double t : kSampleTimes) {
      const Eigen::MatrixXcd ui = time_evolution(in_e, t);
      const Eigen::MatrixXcd uo = time_evolution(out_e, t);
      const Eigen::MatrixXcd lhs = apply_fn(ui * rho * ui.adjoint());
      const Eigen::MatrixXcd rhs = uo * out * uo.adjoint();
      r.max_sampled_deviation = std::max(r.max_sampled_deviation, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  r.sampled = r.max_sampled_deviation <= kSampledTol;
}

}  // namespace

CovariantChannel CovariantChannel::identity(Index n) {
  if (n < 1) throw std::invalid_argument("identity channel: n < 1");
  CovariantChannel e{n, n, {KrausOp{0, std::vector<std::complex<double>>(static_cast<std::size_t>(n), 1.0)}}};
  return e;
}

CovariantChannel CovariantChannel::dephasing(Index n) {
  if (n < 1) throw std::invalid_argument("dephasing channel: n < 1");
  CovariantChannel e{n, n, {}};
  for (Index i = 0; i < n; ++i) {
    KrausOp k{0, std::vector<std::complex<double>>(static_cast<std::size_t>(n))};
    k.coeffs[static_cast<std::size_t>(i)] = 1.0;
    e.kraus.push_back(std::move(k));
  }
  return e;
}

std::vector<double> CovariantChannel::completeness() const {
  std::vector<double> s(static_cast<std::size_t>(in_trunc), 0.0);
  for (const auto& k : kraus)
    for (Index n = 0; n < in_trunc; ++n) s[static_cast<std::size_t>(n)] += std::norm(k.coeff(n));
  return s;
}

void CovariantChannel::validate(double tol) const {
  if (in_trunc < 1 || out_trunc < 1) throw std::invalid_argument("channel: truncations must be >= 1");
  if (kraus.empty()) throw std::invalid_argument("channel: no Kraus operators");
  for (const auto& k : kraus) {
    if (static_cast<Index>(k.coeffs.size()) > in_trunc)
      throw std::invalid_argument("channel: Kraus coefficients beyond in_trunc");
    for (Index n = 0; n < static_cast<Index>(k.coeffs.size()); ++n) {
      if (k.coeffs[static_cast<std::size_t>(n)] == std::complex<double>{}) continue;
      if (!std::isfinite(std::abs(k.coeffs[static_cast<std::size_t>(n)])))
        throw std::invalid_argument("channel: non-finite coefficient");
      const Index m = n - k.shift;
      if (m < 0 || m >= out_trunc) throw std::invalid_argument("channel: Kraus operator leaves the output ladder");
    }
  }
  const auto s = completeness();
  for (Index n = 0; n < in_trunc; ++n)
    if (std::fabs(s[static_cast<std::size_t>(n)] - 1.0) > tol)
      throw std::invalid_argument("channel: completeness violated at level " + std::to_string(n));
}

std::vector<Eigen::MatrixXcd> CovariantChannel::dense() const {
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(kraus.size());
  for (const auto& k : kraus) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(out_trunc, in_trunc);
    for (Index n = 0; n < static_cast<Index>(k.coeffs.size()); ++n) {
      const Index o = n - k.shift;
      if (o >= 0 && o < out_trunc) m(o, n) = k.coeffs[static_cast<std::size_t>(n)];
    }
    ops.push_back(std::move(m));
  }
  return ops;
}

KrausChannel KrausChannel::from(const CovariantChannel& e) {
  return KrausChannel{ladder(e.in_trunc), ladder(e.out_trunc), e.dense()};
}

KrausChannel KrausChannel::unitary(const Eigen::MatrixXcd& u, std::vector<Index> energies) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != energies.size())
    throw std::invalid_argument("unitary channel: shape mismatch");
  return KrausChannel{energies, energies, {u}};
}

KrausChannel KrausChannel::partial_trace(std::vector<Index> sys_energies, std::vector<Index> anc_energies) {
  const Index ds = static_cast<Index>(sys_energies.size());
  const Index da = static_cast<Index>(anc_energies.size());
  if (ds < 1 || da < 1) throw std::invalid_argument("partial trace: empty factor");
  KrausChannel e;
  e.out_energies = sys_energies;
  for (Index s = 0; s < ds; ++s)
    for (Index a = 0; a < da; ++a)
      e.in_energies.push_back(sys_energies[static_cast<std::size_t>(s)] + anc_energies[static_cast<std::size_t>(a)]);
  for (Index b = 0; b < da; ++b) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(ds, ds * da);
    for (Index s = 0; s < ds; ++s) k(s, s * da + b) = 1.0;
    e.ops.push_back(std::move(k));
  }
  return e;
}

double KrausChannel::completeness_error() const {
  const Index din = static_cast<Index>(in_energies.size());
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(din, din);
  for (const auto& k : ops) {
    if (k.rows() != static_cast<Index>(out_energies.size()) || k.cols() != din)
      throw std::invalid_argument("channel: Kraus operator shape mismatch");
    s.noalias() += k.adjoint() * k;
  }
  return (s - Eigen::MatrixXcd::Identity(din, din)).cwiseAbs().maxCoeff();
}

CovarianceReport verify_covariant_report(const KrausChannel& e, int samples, std::uint64_t seed) {
  if (e.ops.empty()) throw std::invalid_argument("channel: no Kraus operators");
  CovarianceReport r;
  r.completeness_error = e.completeness_error();
  if (r.completeness_error > kCompletenessTol) throw std::invalid_argument("channel: completeness violated");
  r.structural = choi_structural(e);
  sampled_check(e.in_energies, e.out_energies, [&](const Eigen::MatrixXcd& rho) { return apply_ops(e.ops, rho); },
                samples, seed, r);
  return r;
}

CovarianceReport verify_covariant_report(const CovariantChannel& e, int samples, std::uint64_t seed) {
  e.validate(kCompletenessTol);
  CovarianceReport r;
  double err = 0.0;
  for (double s : e.completeness()) err = std::max(err, std::fabs(s - 1.0));
  r.completeness_error = err;
  // validate() has checked that every operator is a fixed-shift ladder map on
  // a nondegenerate spectrum, which commutes with the time evolution.
  r.structural = true;
  const auto ops = e.dense();
  sampled_check(ladder(e.in_trunc), ladder(e.out_trunc),
                [&](const Eigen::MatrixXcd& rho) { return apply_ops(ops, rho); }, samples, seed, r);
  return r;
}

bool verify_covariant(const CovariantChannel& e, int samples, std::uint64_t seed) {
  return verify_covariant_report(e, samples, seed).structural;
}

bool verify_covariant(const KrausChannel& e, int samples, std::uint64_t seed) {
  return verify_covariant_report(e, samples, seed).structural;
}

DensityMatrix apply(const CovariantChannel& e, const DensityMatrix& rho) {
  if (rho.dim() != e.in_trunc) throw std::invalid_argument("apply: dimension mismatch");
  for (Index i = 0; i < rho.dim(); ++i)
    if (rho.energies[static_cast<std::size_t>(i)] != i) throw std::invalid_argument("apply: input is not on the ladder");
  DensityMatrix out;
  out.rho = Eigen::MatrixXcd::Zero(e.out_trunc, e.out_trunc);
  out.energies = ladder(e.out_trunc);
  for (const auto& k : e.kraus) {
    const Index lo = std::max<Index>(0, k.shift);
    const Index hi = std::min<Index>(static_cast<Index>(k.coeffs.size()), e.out_trunc + k.shift);
    for (Index n = lo; n < hi; ++n) {
      const auto cn = k.coeffs[static_cast<std::size_t>(n)];
      if (cn == std::complex<double>{}) continue;
      for (Index n2 = lo; n2 < hi; ++n2)
        out.rho(n - k.shift, n2 - k.shift) += cn * rho.rho(n, n2) * std::conj(k.coeffs[static_cast<std::size_t>(n2)]);
    }
  }
  if (std::fabs(out.rho.trace().real() - 1.0) > 1e-10) throw std::runtime_error("apply: trace not preserved");
  return out;
}

DensityMatrix apply(const KrausChannel& e, const DensityMatrix& rho) {
  if (rho.energies != e.in_energies) throw std::invalid_argument("apply: dimension or energy mismatch");
  DensityMatrix out{apply_ops(e.ops, rho.rho), e.out_energies};
  if (std::fabs(out.rho.trace().real() - 1.0) > 1e-10) throw std::runtime_error("apply: trace not preserved");
  return out;
}

CovariantChannel build_conversion(const PureState& psi, const PureState& phi, const AMajorOptions& opts) {
  const auto v = one_shot_convertible<Rational>(psi, phi, opts);
  if (!v.holds || !v.witness) throw std::invalid_argument("build_conversion: psi does not a-majorize phi");
  const RatSeq ppsi = truncated_profile(psi);
  const RatSeq pphi = truncated_profile(phi);
  const RatSeq& w = *v.witness;
  const bool exact = v.witness_log_scale == 0.0;

  CovariantChannel e;
  e.in_trunc = psi.n_trunc();
  e.out_trunc = phi.n_trunc();
  for (Index k = w.lo(); k <= w.hi(); ++k) {
    if (sgn(w(k)) <= 0) continue;
    KrausOp op{k, std::vector<std::complex<double>>(static_cast<std::size_t>(e.in_trunc))};
    bool any = false;
    for (Index n = std::max<Index>(0, k); n < e.in_trunc; ++n) {
      const Index m = n - k;
      if (m >= e.out_trunc || sgn(ppsi(n)) == 0 || sgn(pphi(m)) == 0) continue;
      double c2;
      if (exact) {
        c2 = to_double(Rational(w(k) * pphi(m) / ppsi(n)));
      } else {
        const double pn = to_double(ppsi(n));
        if (pn < 1e-14) continue;
        c2 = std::exp(v.witness_log_scale) * to_double(w(k)) * to_double(pphi(m)) / pn;
      }
      const double phase = phi.amps()[static_cast<std::size_t>(m)].phase - psi.amps()[static_cast<std::size_t>(n)].phase;
      op.coeffs[static_cast<std::size_t>(n)] = std::polar(std::sqrt(c2), phase);
      any = true;
    }
    if (any) e.kraus.push_back(std::move(op));
  }
  // Rows are complete up to rounding (and truncation tails); normalize them
  // and send unsupported levels to the ground state.
  const auto s = e.completeness();
  for (Index n = 0; n < e.in_trunc; ++n) {
    const double sn = s[static_cast<std::size_t>(n)];
    if (sn > 0.0) {
      const double f = 1.0 / std::sqrt(sn);
      for (auto& op : e.kraus) op.coeffs[static_cast<std::size_t>(n)] *= f;
    } else {
      KrausOp dump{n, std::vector<std::complex<double>>(static_cast<std::size_t>(e.in_trunc))};
      dump.coeffs[static_cast<std::size_t>(n)] = 1.0;
      e.kraus.push_back(std::move(dump));
    }
  }
  e.validate(kCompletenessTol);
  return e;
}

PhaseAlignment phase_align_unitary(const PureState& psi, const PureState& phi) {
  PhaseAlignment a;
  a.phases.assign(static_cast<std::size_t>(psi.n_trunc()), 0.0);
  double bc = 0.0, tv = 0.0;
  const Index n_max = std::max(psi.n_trunc(), phi.n_trunc());
  for (Index n = 0; n < n_max; ++n) {
    const double x = std::abs(psi.amplitude(n)), y = std::abs(phi.amplitude(n));
    bc += x * y;
    tv += std::fabs(x * x - y * y);
    if (n < psi.n_trunc() && n < phi.n_trunc() && x > 0.0 && y > 0.0)
      a.phases[static_cast<std::size_t>(n)] =
          phi.amps()[static_cast<std::size_t>(n)].phase - psi.amps()[static_cast<std::size_t>(n)].phase;
  }
  bc = std::min(bc, 1.0);
  a.achieved_distance = std::sqrt(std::max(0.0, 1.0 - bc * bc));
  a.dtv_bound = std::sqrt(2.0 * 0.5 * tv);
  return a;
}

PureState apply_phases(const PureState& psi, const std::vector<double>& phases) {
  std::vector<Amplitude> v = psi.amps();
  for (std::size_t i = 0; i < v.size() && i < phases.size(); ++i) v[i].phase += phases[i];
  PureState out = PureState::from_polar(std::move(v));
  if (psi.exact_profile()) out = out.with_exact_profile(*psi.exact_profile());
  if (psi.factor()) out = out.with_factor(*psi.factor());
  return out;
}

Dilation purification_profile_check(const CovariantChannel& e, const Rational& lambda) {
  e.validate(kCompletenessTol);
  if (sgn(lambda) <= 0) throw std::invalid_argument("purification_profile_check: lambda must be > 0");
  const PureState chi = poisson_profile_state(lambda, e.in_trunc);
  Dilation d;
  const Index nops = static_cast<Index>(e.kraus.size());
  d.phi.amps = Eigen::MatrixXcd::Zero(e.out_trunc, nops);
  for (Index a = 0; a < nops; ++a) {
    const auto& op = e.kraus[static_cast<std::size_t>(a)];
    d.phi.anc_energies.push_back(op.shift);
    for (Index n = 0; n < e.in_trunc; ++n) {
      const auto c = op.coeff(n);
      if (c != std::complex<double>{}) d.phi.amps(n - op.shift, a) = c * chi.amplitude(n);
    }
  }
  d.total_profile = total_energy_profile(d.phi);
  const double l = to_double(lambda);
  const F64Seq ref = poisson(l, e.in_trunc);
  d.truncation_tail = poisson_tail(l, e.in_trunc);
  double diff = d.truncation_tail;
  for (Index n = std::min(d.total_profile.lo(), Index{0}); n <= std::max(d.total_profile.hi(), e.in_trunc - 1); ++n)
    diff += std::fabs(d.total_profile(n) - ref(n));
  d.tv_to_poisson = 0.5 * diff;
  const DensityMatrix out = apply(e, DensityMatrix::from_pure(chi, e.in_trunc));
  d.reduced_error = (reduced_state(d.phi) - out.rho).cwiseAbs().maxCoeff();
  // Renormalizing the truncated chi moves exactly the tail mass, so the
  // distance equals the tail up to rounding.
  d.ok = d.tv_to_poisson <= d.truncation_tail * (1.0 + 1e-9) + 1e-15 && d.reduced_error <= 1e-10;
  // Untruncated, the dilation's total energy is exactly P_lambda.
  if (d.ok) d.phi.factor = PoissonFactor{lambda, RatSeq::delta(0)};
  return d;
}

namespace {

// sqrt(1 - |<a|b>|^2) through the Lagrange identity
// |a|^2 |b|^2 - |<a|b>|^2 = 1/2 sum_{i,j} |a_i b_j - a_j b_i|^2, which does not
// cancel when a and b nearly coincide.
double pure_distance(const PureState& a, const PureState& b) {
  const Index n = std::max(a.n_trunc(), b.n_trunc());
  double cross = 0.0, na = 0.0, nb = 0.0;
  for (Index i = 0; i < n; ++i) {
    na += std::norm(a.amplitude(i));
    nb += std::norm(b.amplitude(i));
    for (Index j = i + 1; j < n; ++j)
      cross += std::norm(a.amplitude(i) * b.amplitude(j) - a.amplitude(j) * b.amplitude(i));
  }
  return std::sqrt(std::min(1.0, cross / (na * nb)));
}

}  // namespace

double smoothing_bound(double eps) {
  const double a = 1.0 - eps;
  return std::sqrt(2.0 * std::sqrt(std::max(0.0, 1.0 - a * a)));
}

SmoothingWitness smoothing_witness(const PureState& psi, const PureState& phi, const CovariantChannel& e) {
  if (e.in_trunc != psi.n_trunc()) throw std::invalid_argument("smoothing_witness: channel does not act on psi");
  const DensityMatrix out = apply(e, DensityMatrix::from_pure(psi));
  SmoothingWitness s;
  s.eps = trace_distance(out, phi);
  if (s.eps > 1.0 + 1e-12) throw std::invalid_argument("smoothing_witness: trace distance above 1");
  s.eps = std::min(s.eps, 1.0);

  std::map<Index, double> w;
  for (const auto& op : e.kraus) {
    double t = 0.0;
    for (Index n = 0; n < psi.n_trunc(); ++n) t += std::norm(op.coeff(n) * psi.amplitude(n));
    if (t > 0.0) w[op.shift] += t;
  }
  const Index klo = w.begin()->first, khi = w.rbegin()->first;
  std::vector<double> wf(static_cast<std::size_t>(khi - klo + 1), 0.0);
  std::vector<Rational> wr(wf.size());
  Rational total(0);
  for (const auto& [k, x] : w) {
    wf[static_cast<std::size_t>(k - klo)] = x;
    wr[static_cast<std::size_t>(k - klo)] = to_rational(x);
    total += to_rational(x);
  }
  for (auto& x : wr) x /= total;
  s.w = F64Seq(klo, std::move(wf));
  const RatSeq wrat(klo, std::move(wr));
  const RatSeq pphi = truncated_profile(phi);
  s.profile = convolve(wrat, pphi);
  if (s.profile.lo() < 0) throw std::invalid_argument("smoothing_witness: channel raises phi below the ground level");

  std::vector<double> phases(static_cast<std::size_t>(s.profile.hi() + 1), 0.0);
  for (Index n = 0; n < psi.n_trunc() && n <= s.profile.hi(); ++n)
    phases[static_cast<std::size_t>(n)] = psi.amps()[static_cast<std::size_t>(n)].phase;
  s.psi_prime = PureState::from_exact_profile(s.profile, phases);

  s.dist = pure_distance(psi, s.psi_prime);
  s.bound = smoothing_bound(s.eps);
  s.loose_bound = 2.0 * std::pow(s.eps, 0.25);
  const auto v = a_majorizes(RatDist::make_complete(s.profile), RatDist::make_complete(pphi));
  s.majorizes = v.holds && v.certified;
  return s;
}

CovariantChannel random_covariant_channel(Index in_trunc, Index out_trunc, int n_ops, Index min_shift,
                                          Index max_shift, std::mt19937_64& rng) {
  if (in_trunc < 1 || out_trunc < 1 || n_ops < 1 || min_shift > max_shift)
    throw std::invalid_argument("random_covariant_channel: invalid arguments");
  std::uniform_int_distribution<Index> shift(min_shift, max_shift);
  std::normal_distribution<double> g(0.0, 1.0);
  CovariantChannel e{in_trunc, out_trunc, {}};
  for (int i = 0; i < n_ops; ++i) {
    KrausOp op{shift(rng), std::vector<std::complex<double>>(static_cast<std::size_t>(in_trunc))};
    for (Index n = 0; n < in_trunc; ++n) {
      const Index m = n - op.shift;
      if (m >= 0 && m < out_trunc) op.coeffs[static_cast<std::size_t>(n)] = {g(rng), g(rng)};
    }
    e.kraus.push_back(std::move(op));
  }
  const auto s = e.completeness();
  for (Index n = 0; n < in_trunc; ++n) {
    const double sn = s[static_cast<std::size_t>(n)];
    if (sn > 0.0) {
      for (auto& op : e.kraus) op.coeffs[static_cast<std::size_t>(n)] /= std::sqrt(sn);
    } else {
      KrausOp dump{n, std::vector<std::complex<double>>(static_cast<std::size_t>(in_trunc))};
      dump.coeffs[static_cast<std::size_t>(n)] = 1.0;
      e.kraus.push_back(std::move(dump));
    }
  }
  e.validate(kCompletenessTol);
  return e;
}

}  // namespace asym
