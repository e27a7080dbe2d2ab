// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/qfi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace asym {

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::exact: return "exact";
    case BoundKind::upper_bound: return "upper_bound";
    case BoundKind::lower_bound: return "lower_bound";
    case BoundKind::estimate: return "estimate";
  }
  return "estimate";
}

double qfi_pure(const PureState& psi, const Tolerance& tol) {
  const F64Dist p = psi.energy_distribution<double>(tol);
  return 4.0 * variance(p.probabilities());
}

double qfi_mixed(const DensityMatrix& rho) {
  if (rho.dim() > 64) throw std::invalid_argument("qfi_mixed: dimension above 64");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
  if (es.info() != Eigen::Success) throw std::runtime_error("qfi_mixed: eigensolver failed");
  const Eigen::VectorXd l = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  Eigen::VectorXd e(rho.dim());
  for (Index n = 0; n < rho.dim(); ++n) e(n) = static_cast<double>(rho.energies[static_cast<std::size_t>(n)]);
  const Eigen::MatrixXcd h = v.adjoint() * e.asDiagonal() * v;
  double f = 0.0;
  for (Index i = 0; i < rho.dim(); ++i)
    for (Index j = 0; j < rho.dim(); ++j) {
      const double s = l(i) + l(j);
      if (s <= 1e-12) continue;
      const double d = l(i) - l(j);
      f += d * d / s * std::norm(h(i, j));
    }
  return 2.0 * f;
}

namespace {

constexpr int kMaxDoublings = 80;

template <class T>
bool is_point_mass(const Distribution<T>& d) {
  return d.complete() && d.seq.size() == 1;
}

template <class T>
T lambda_value(double x) {
  if constexpr (BackendOf<T>::value == Backend::rational) return to_rational(x);
  else return x;
}

Rational as_rational(const Rational& x) { return x; }
Rational as_rational(double x) { return to_rational(x); }

template <class T>
QfiBracket point_mass_bracket() {
  QfiBracket b;
  b.value = 0.0;
  b.lower = 0.0;
  b.upper = 0.0;
  b.kind = BoundKind::exact;
  b.window_value = 0.0;
  b.note = "point mass";
  return b;
}

// One feasibility decision of the bisection.
struct Step {
  bool feasible = false;
  bool certified = false;
  std::string certificate;
  Index window_lo = 0;
  Index window_hi = 0;
};

void finish(QfiBracket& b, double tol) {
  if (std::isinf(b.lower)) {
    b.value = b.lower;
    b.kind = BoundKind::exact;
  } else if (std::isfinite(b.upper) && b.upper - b.lower <= tol * (1.0 + 1e-9)) {
    b.value = b.upper;
    b.kind = BoundKind::exact;
  } else if (std::isfinite(b.upper)) {
    b.value = b.upper;
    b.kind = BoundKind::upper_bound;
  } else {
    b.value = b.lower;
    b.kind = BoundKind::lower_bound;
  }
  b.lambda_star = b.value / 4.0;
}

}  // namespace

template <class T>
QfiBracket f_max_of(const Distribution<T>& p, const FisherOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("f_max: tol must be > 0");
  if (is_point_mass(p)) return point_mass_bracket<T>();
  // P_lambda * p~ >= 0 is impossible for every lambda when p is finite and not
  // a point mass, or a Poisson mixture with a non-degenerate mixing law.
  const bool never = p.complete() || (p.factor && !p.factor->is_shifted_poisson());
  if (never && !p.complete()) {
    QfiBracket b;
    b.lower = std::numeric_limits<double>::infinity();
    b.note = "Poisson mixture with a non-degenerate mixing law";
    finish(b, opts.tol);
    return b;
  }
  const Index nq = p.seq.lo();
  // P_lambda must be exact up to the last witness index that a_majorizes can check.
  const Index whi = p.complete() ? p.seq.hi() - nq + opts.extension : p.valid_hi() - 2 * nq;
  const Index n_trunc = std::max<Index>(1, whi + nq + 1);
  AMajorOptions ao{opts.extension, opts.tolerance};
  // A certified verdict decides; otherwise the window does. In the `never`
  // case the window edge is still tracked for window_value.
  auto test = [&](const T& lambda) {
    Distribution<T> pl = poisson_distribution<T>(as_rational(lambda), n_trunc);
    if (!never) {
      if (auto c = structural_verdict(pl, p)) return Step{c->first, true, c->second};
    }
    const auto v = a_majorizes(pl, p, ao);
    return Step{(never || !v.certified) ? v.window_holds : v.holds, v.certified && !never, v.certificate,
                v.window_lo, v.window_hi};
  };
  auto feasible = [](const Step& s) { return s.feasible; };
  const double var = variance(p.probabilities());
  T lo(0);
  T hi = lambda_value<T>(std::max(var, 0.25));
  const double cap = std::max(std::ldexp(var, 20), 1.0);
  QfiBracket b;
  auto v = test(hi);
  int it = 0;
  while (!feasible(v) && it < kMaxDoublings && to_double(hi) <= cap) {
    lo = hi;
    hi = hi * 2;
    v = test(hi);
    ++it;
  }
  b.window_lo = v.window_lo;
  b.window_hi = v.window_hi;
  if (!feasible(v)) {
    b.lower = never ? std::numeric_limits<double>::infinity() : 4.0 * to_double(lo);
    b.iterations = it;
    b.note = "no feasible lambda up to the search cap";
    finish(b, opts.tol);
    return b;
  }
  while (4.0 * to_double(T(hi - lo)) > opts.tol) {
    T mid = (lo + hi) / 2;
    auto vm = test(mid);
    ++it;
    if (feasible(vm)) {
      hi = mid;
      v = vm;
    } else {
      lo = mid;
    }
  }
  b.iterations = it;
  b.window_value = 4.0 * to_double(hi);
  // Infeasibility at lo is a negative entry or a certificate, so lo is certified.
  b.lower = 4.0 * to_double(lo);
  if (never) {
    b.lower = std::numeric_limits<double>::infinity();
    b.note = "no Poisson reference reaches p; window_value is window-limited";
  } else if (v.certified) {
    b.upper = 4.0 * to_double(hi);
    b.note = v.certificate;
  } else {
    b.note = "feasibility verified on the window only";
  }
  finish(b, opts.tol);
  return b;
}

template <class T>
QfiBracket f_min_of(const Distribution<T>& p, const FisherOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("f_min: tol must be > 0");
  if (is_point_mass(p)) return point_mass_bracket<T>();
  // p * P_{-lambda} has a sign-alternating tail for every lambda > 0 when p is
  // finite and not a point mass.
  const bool never = p.complete();
  const Index whi = p.complete() ? p.seq.hi() + opts.extension : p.valid_hi();
  const Index n_trunc = std::max<Index>(1, whi - p.seq.lo() + 1);
  AMajorOptions ao{opts.extension, opts.tolerance};
  auto test = [&](const T& lambda) {
    Distribution<T> pl = poisson_distribution<T>(as_rational(lambda), n_trunc);
    if (!never) {
      if (auto c = structural_verdict(p, pl)) return Step{c->first, true, c->second};
    }
    const auto v = a_majorizes(p, pl, ao);
    return Step{(never || !v.certified) ? v.window_holds : v.holds, v.certified && !never, v.certificate,
                v.window_lo, v.window_hi};
  };
  auto feasible = [](const Step& s) { return s.feasible; };
  const double var = variance(p.probabilities());
  T lo(0);
  T hi = lambda_value<T>(var + opts.tol / 8.0);
  QfiBracket b;
  auto v = test(hi);
  int it = 0;
  std::optional<Step> vlo;
  while (feasible(v) && it < kMaxDoublings) {
    lo = hi;
    vlo = v;
    hi = hi * 2;
    v = test(hi);
    ++it;
  }
  if (feasible(v)) throw std::runtime_error("f_min: no infeasible lambda found");
  b.window_lo = v.window_lo;
  b.window_hi = v.window_hi;
  while (4.0 * to_double(T(hi - lo)) > opts.tol) {
    T mid = (lo + hi) / 2;
    auto vm = test(mid);
    ++it;
    if (feasible(vm)) {
      lo = mid;
      vlo = vm;
    } else {
      hi = mid;
    }
  }
  b.iterations = it;
  b.window_value = 4.0 * to_double(lo);
  b.upper = 4.0 * to_double(hi);
  if (never) {
    b.upper = 0.0;
    b.note = "no positive lambda is feasible; window_value is window-limited";
  } else if (!vlo) {
    b.lower = 0.0;
    b.note = "only lambda = 0 is feasible on the window";
  } else if (vlo->certified) {
    b.lower = 4.0 * to_double(lo);
    b.note = vlo->certificate;
  } else {
    b.note = "feasibility verified on the window only";
  }
  finish(b, opts.tol);
  return b;
}

namespace {

template <class R>
R dispatch(Backend backend, auto&& rational_fn, auto&& f64_fn) {
  return backend == Backend::rational ? rational_fn() : f64_fn();
}

}  // namespace

QfiBracket f_max_pure(const PureState& psi, const FisherOptions& opts) {
  return dispatch<QfiBracket>(
      opts.backend, [&] { return f_max_of(psi.energy_distribution<Rational>(), opts); },
      [&] { return f_max_of(psi.energy_distribution<double>(opts.tolerance), opts); });
}

QfiBracket f_min_pure(const PureState& psi, const FisherOptions& opts) {
  return dispatch<QfiBracket>(
      opts.backend, [&] { return f_min_of(psi.energy_distribution<Rational>(), opts); },
      [&] { return f_min_of(psi.energy_distribution<double>(opts.tolerance), opts); });
}

F64Seq total_energy_profile(const Purification& phi) {
  if (static_cast<std::size_t>(phi.amps.cols()) != phi.anc_energies.size())
    throw std::invalid_argument("purification: ancilla energy list does not match");
  Index emin = 0, emax = 0;
  bool first = true;
  for (Index s = 0; s < phi.amps.rows(); ++s)
    for (Index a = 0; a < phi.amps.cols(); ++a) {
      const Index e = s + phi.anc_energies[static_cast<std::size_t>(a)];
      if (first || e < emin) emin = e;
      if (first || e > emax) emax = e;
      first = false;
    }
  std::vector<double> v(static_cast<std::size_t>(emax - emin + 1), 0.0);
  for (Index s = 0; s < phi.amps.rows(); ++s)
    for (Index a = 0; a < phi.amps.cols(); ++a)
      v[static_cast<std::size_t>(s + phi.anc_energies[static_cast<std::size_t>(a)] - emin)] += std::norm(phi.amps(s, a));
  return F64Seq(emin, std::move(v));
}

Eigen::MatrixXcd reduced_state(const Purification& phi) { return phi.amps * phi.amps.adjoint(); }

namespace {

Eigen::MatrixXcd haar_unitary(Index r, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < r; ++j) {
    const std::complex<double> d = rr(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

struct Candidate {
  QfiBracket bracket;
  double score = std::numeric_limits<double>::infinity();
};

double score_of(const QfiBracket& b) {
  if (std::isfinite(b.upper)) return b.upper;
  if (!std::isnan(b.window_value)) return 1e6 + b.window_value;
  return std::numeric_limits<double>::infinity();
}

QfiBracket evaluate_profile(const F64Seq& profile, const FisherOptions& fo) {
  F64Seq p = profile;
  const double m = mass(p);
  p = scale(p, 1.0 / m);
  return f_max_of(F64Dist::make_complete(p, fo.tolerance), fo);
}

}  // namespace

QfiBracket f_max_mixed_upper(const DensityMatrix& rho, const MixedSearchOptions& opts) {
  if (rho.dim() > 16) throw std::invalid_argument("f_max_mixed_upper: dimension above 16");
  if (opts.anc_levels < 1 || opts.anc_levels > 8) throw std::invalid_argument("f_max_mixed_upper: anc_levels must be in [1, 8]");
  if (opts.restarts < 1) throw std::invalid_argument("f_max_mixed_upper: restarts must be >= 1");
  for (std::size_t i = 0; i < rho.energies.size(); ++i)
    if (rho.energies[i] != static_cast<Index>(i))
      throw std::invalid_argument("f_max_mixed_upper: basis must be the ladder 0..dim-1");
  const double floor_f = qfi_mixed(rho);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
  std::vector<Index> keep;
  for (Index i = 0; i < rho.dim(); ++i)
    if (es.eigenvalues()(i) > 1e-12) keep.push_back(i);
  const Index r = static_cast<Index>(keep.size());
  Eigen::MatrixXcd m(rho.dim(), r);  // columns sqrt(l_i) v_i
  for (Index c = 0; c < r; ++c) m.col(c) = std::sqrt(es.eigenvalues()(keep[c])) * es.eigenvectors().col(keep[c]);

  Candidate best;
  auto consider = [&](const QfiBracket& b, const char* origin) {
    const double s = score_of(b);
    if (s < best.score) {
      best.score = s;
      best.bracket = b;
      best.bracket.note = std::string(origin) + ": " + b.note;
    }
  };

  if (r == 1) {
    // Every purification of a pure state is a product; F_max cannot drop.
    std::vector<double> v(static_cast<std::size_t>(rho.dim()));
    for (Index s = 0; s < rho.dim(); ++s) v[static_cast<std::size_t>(s)] = std::norm(m(s, 0));
    QfiBracket b = evaluate_profile(F64Seq(0, std::move(v)), opts.fisher);
    b.note = "pure input: " + b.note;
    return b;
  }

  if (rho.commutator_norm() <= 1e-10) {
    // Energy-diagonal state: ancilla energy C - n makes the total energy sharp.
    QfiBracket b = point_mass_bracket<double>();
    b.note = "symmetric input: correlated ancilla energies give an eigenstate purification";
    return b;
  }

  for (const auto& seed : opts.seeds) {
    if (seed.amps.rows() < rho.dim()) continue;
    const Eigen::MatrixXcd red = reduced_state(seed);
    Eigen::MatrixXcd pad = Eigen::MatrixXcd::Zero(red.rows(), red.cols());
    pad.topLeftCorner(rho.dim(), rho.dim()) = rho.rho;
    if ((red - pad).cwiseAbs().maxCoeff() > 1e-9) continue;
    const F64Seq prof = total_energy_profile(seed);
    if (seed.factor) {
      const Index n = prof.hi() + 1;
      F64Dist tagged = poisson_mixture_distribution<double>(*seed.factor, n);
      F64Seq shifted = shift(prof, 0);
      if (prof.lo() >= 0) {
        double dev = 0.0;
        for (Index k = 0; k < n; ++k) dev = std::max(dev, std::fabs(tagged.seq(k) - shifted(k)));
        if (dev <= 1e-9) {
          consider(f_max_of(tagged, opts.fisher), "seed purification");
          continue;
        }
      }
    }
    consider(evaluate_profile(prof, opts.fisher), "seed purification");
  }

  // Search: ancilla basis rotation u and energies e_a in [0, anc_levels).
  FisherOptions coarse = opts.fisher;
  coarse.tol = std::max(coarse.tol, 1e-3);
  coarse.extension = std::min<Index>(coarse.extension, 16);
  std::mt19937_64 rng(opts.seed);
  Eigen::VectorXd mean_e(r);
  for (int restart = 0; restart < opts.restarts; ++restart) {
    const Eigen::MatrixXcd u = restart == 0 ? Eigen::MatrixXcd::Identity(r, r) : haar_unitary(r, rng);
    Purification phi;
    phi.amps = m * u.transpose();
    phi.anc_energies.assign(static_cast<std::size_t>(r), 0);
    for (Index a = 0; a < r; ++a) {
      double w = 0.0, e = 0.0;
      for (Index s = 0; s < rho.dim(); ++s) {
        w += std::norm(phi.amps(s, a));
        e += static_cast<double>(s) * std::norm(phi.amps(s, a));
      }
      const double target = static_cast<double>(opts.anc_levels - 1) - (w > 0.0 ? e / w : 0.0);
      phi.anc_energies[static_cast<std::size_t>(a)] =
          std::clamp<Index>(static_cast<Index>(std::lround(target)), 0, opts.anc_levels - 1);
    }
    double cur = score_of(evaluate_profile(total_energy_profile(phi), coarse));
    for (int sweep = 0; sweep < 4; ++sweep) {
      bool improved = false;
      for (Index a = 0; a < r; ++a) {
        const Index keep_e = phi.anc_energies[static_cast<std::size_t>(a)];
        Index best_e = keep_e;
        for (Index e = 0; e < opts.anc_levels; ++e) {
          if (e == keep_e) continue;
          phi.anc_energies[static_cast<std::size_t>(a)] = e;
          const double s = score_of(evaluate_profile(total_energy_profile(phi), coarse));
          if (s < cur - 1e-12) {
            cur = s;
            best_e = e;
            improved = true;
          }
        }
        phi.anc_energies[static_cast<std::size_t>(a)] = best_e;
      }
      if (!improved) break;
    }
    consider(evaluate_profile(total_energy_profile(phi), opts.fisher), "searched purification");
  }

  QfiBracket out = best.bracket;
  out.lower = std::max(floor_f, 0.0);
  if (std::isfinite(out.upper)) {
    out.value = out.upper;
    out.kind = out.upper - out.lower <= opts.fisher.tol ? BoundKind::exact : BoundKind::upper_bound;
  } else {
    out.upper = std::numeric_limits<double>::infinity();
    out.value = out.window_value;
    out.kind = BoundKind::estimate;
    out.note += "; no certified purification found, value is the smallest window-limited estimate";
  }
  out.lambda_star = out.value / 4.0;
  return out;
}

template <class T>
AMajorVerdict<T> one_shot_convertible(const PureState& psi, const PureState& phi, const AMajorOptions& opts) {
  return a_majorizes(psi.energy_distribution<T>(opts.tol), phi.energy_distribution<T>(opts.tol), opts);
}

GapCheck sufficiency_gap_check(const PureState& psi, const PureState& phi, const FisherOptions& opts) {
  GapCheck g;
  g.f_min_psi = f_min_pure(psi, opts);
  g.f_max_phi = f_max_pure(phi, opts);
  g.gap = g.f_min_psi.lower > g.f_max_phi.upper;
  AMajorOptions ao{opts.extension, opts.tolerance};
  g.converts = opts.backend == Backend::rational ? one_shot_convertible<Rational>(psi, phi, ao).holds
                                                 : one_shot_convertible<double>(psi, phi, ao).holds;
  if (g.gap && !g.converts) throw std::logic_error("sufficiency_gap_check: certified gap without conversion");
  return g;
}

template QfiBracket f_max_of(const Distribution<Rational>&, const FisherOptions&);
template QfiBracket f_max_of(const Distribution<double>&, const FisherOptions&);
template QfiBracket f_min_of(const Distribution<Rational>&, const FisherOptions&);
template QfiBracket f_min_of(const Distribution<double>&, const FisherOptions&);
template AMajorVerdict<Rational> one_shot_convertible<Rational>(const PureState&, const PureState&, const AMajorOptions&);
template AMajorVerdict<double> one_shot_convertible<double>(const PureState&, const PureState&, const AMajorOptions&);

}  // namespace asym
