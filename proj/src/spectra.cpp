// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace asym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridSteps = 50;  // simplex grid step 1/50 = 0.02
constexpr Index kMixtureMaxLevels = 16;
constexpr Index kWindowShifts = 3;
constexpr std::size_t kRefinedWindows = 3;

void check_eps(double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0)) throw std::invalid_argument("smoothing: eps must be in [0, 1)");
}

// Center of the ball: amplitudes on [0, M) and the profile.
struct Target {
  Eigen::VectorXcd psi;
  F64Seq p;
  Index levels = 0;
};

Target make_target(const PureState& psi) {
  Target t;
  // The ball is centred on the truncated state itself, tagged or not.
  std::vector<double> v(static_cast<std::size_t>(psi.n_trunc()));
  for (Index n = 0; n < psi.n_trunc(); ++n) v[static_cast<std::size_t>(n)] = std::norm(psi.amplitude(n));
  t.p = F64Seq(0, std::move(v));
  if (t.p.empty()) throw std::invalid_argument("smoothing: empty state");
  t.levels = t.p.hi() + 1;
  t.psi = ladder_vector(psi, t.levels);
  return t;
}

// Truncated chi_lambda. D(chi, chi_N) = sqrt(tail).
struct Chi {
  std::vector<double> amp;
  double sqrt_tail = 0.0;
};

Chi make_chi(double lambda) {
  Chi c;
  const Index n = default_poisson_trunc(lambda);
  const F64Seq p = poisson(lambda, n);
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += p(i);
  c.amp.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) c.amp[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, p(i)) / s);
  c.sqrt_tail = std::sqrt(poisson_tail(lambda, n));
  return c;
}

double distance_to(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi) {
  return trace_distance(rho, psi * psi.adjoint());
}

// Matched covariant channels: one Kraus operator per shift k (|n> -> |n - k>)
// with coefficients c_kn = sqrt(r_k) conj(psi_{n-k}) chi_n / nu_n, where
// nu_n = sqrt(sum_k r_k |psi_{n-k}|^2 chi_n^2) makes every input level
// complete. The output is rho(r) = sum_k r_k u_k u_k^dag with
// u_k(m) = psi_m chi_{m+k}^2 / nu_{m+k}.
struct MatchedFamily {
  const Target* t = nullptr;
  const Chi* chi = nullptr;
  Index k_lo = 0;
  Index k_hi = 0;
  std::vector<double> pm;  // |psi_m|^2

  MatchedFamily(const Target& target, const Chi& c, Index lo, Index hi) : t(&target), chi(&c), k_lo(lo), k_hi(hi) {
    pm.resize(static_cast<std::size_t>(t->levels));
    for (Index m = 0; m < t->levels; ++m) pm[static_cast<std::size_t>(m)] = std::norm(t->psi(m));
  }
  Index n_in() const { return static_cast<Index>(chi->amp.size()); }
  double a(Index k, Index n) const {
    const Index m = n - k;
    if (m < 0 || m >= t->levels || n < 0 || n >= n_in()) return 0.0;
    const double x = chi->amp[static_cast<std::size_t>(n)];
    return pm[static_cast<std::size_t>(m)] * x * x;
  }
  double weight(const std::vector<double>& r, Index k) const {
    return k < k_lo || k > k_hi ? 0.0 : r[static_cast<std::size_t>(k - k_lo)];
  }
  std::vector<double> nu(const std::vector<double>& r) const {
    std::vector<double> out(static_cast<std::size_t>(n_in()));
    for (Index n = 0; n < n_in(); ++n) {
      double z = 0.0;
      for (Index m = 0; m < t->levels; ++m) z += weight(r, n - m) * a(n - m, n);
      out[static_cast<std::size_t>(n)] = std::sqrt(z);
    }
    return out;
  }
  // Levels that no weighted operator can move are sent to |0>.
  Eigen::MatrixXcd state(const std::vector<double>& r) const {
    const auto v = nu(r);
    const Index m_out = t->levels;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(m_out, k_hi - k_lo + 1);
    double dumped = 0.0;
    for (Index n = 0; n < n_in(); ++n)
      if (v[static_cast<std::size_t>(n)] == 0.0) dumped += chi->amp[static_cast<std::size_t>(n)] * chi->amp[static_cast<std::size_t>(n)];
    for (Index k = k_lo; k <= k_hi; ++k) {
      const double w = weight(r, k);
      if (w == 0.0) continue;
      for (Index m = 0; m < m_out; ++m) {
        const Index n = m + k;
        if (n < 0 || n >= n_in() || v[static_cast<std::size_t>(n)] == 0.0) continue;
        const double x = chi->amp[static_cast<std::size_t>(n)];
        u(m, k - k_lo) = std::sqrt(w) * t->psi(m) * x * x / v[static_cast<std::size_t>(n)];
      }
    }
    Eigen::MatrixXcd rho = u * u.adjoint();
    rho(0, 0) += dumped;
    return rho;
  }
  double distance(const std::vector<double>& r) const { return distance_to(state(r), t->psi) + chi->sqrt_tail; }
};

// Fidelity <psi|rho(r)|psi> is maximized by the minorize-maximize update
// r_k <- (r_k sum_n a_kn / nu_n)^2 / norm, started from uniform weights.
std::vector<double> mm_weights(const MatchedFamily& f) {
  const Index nops = f.k_hi - f.k_lo + 1;
  std::vector<double> r(static_cast<std::size_t>(nops), 1.0 / static_cast<double>(nops));
  double prev = -1.0;
  for (int it = 0; it < 200; ++it) {
    const auto v = f.nu(r);
    std::vector<double> next(r.size(), 0.0);
    double fid = 0.0;
    for (Index k = f.k_lo; k <= f.k_hi; ++k) {
      double z = 0.0;
      for (Index m = 0; m < f.t->levels; ++m) {
        const Index n = m + k;
        if (n < 0 || n >= f.n_in() || v[static_cast<std::size_t>(n)] == 0.0) continue;
        z += f.a(k, n) / v[static_cast<std::size_t>(n)];
      }
      const double sk = std::sqrt(r[static_cast<std::size_t>(k - f.k_lo)]) * z;
      next[static_cast<std::size_t>(k - f.k_lo)] = sk * sk;
      fid += sk * sk;
    }
    if (!(fid > 0.0)) break;
    for (auto& x : next) x /= fid;
    r.swap(next);
    if (fid - prev <= 1e-13 * std::max(1.0, fid)) break;
    prev = fid;
  }
  return r;
}

// Pattern search minimizing the exact trace distance over the heaviest
// shifts: multiplicative moves on single weights and transfers of a fraction
// of one weight to another (which also reaches weights that are zero).
double refine_weights(const MatchedFamily& f, std::vector<double>& r, int max_evals) {
  double best = f.distance(r);
  std::vector<Index> idx(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) idx[i] = static_cast<Index>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](Index x, Index y) { return r[static_cast<std::size_t>(x)] > r[static_cast<std::size_t>(y)]; });
  idx.resize(std::min<std::size_t>(idx.size(), 12));
  int evals = 0;
  auto try_move = [&](std::vector<double> trial) {
    double z = 0.0;
    for (double y : trial) z += y;
    for (auto& y : trial) y /= z;
    const double d = f.distance(trial);
    ++evals;
    if (d < best - 1e-15) {
      best = d;
      r.swap(trial);
      return true;
    }
    return false;
  };
  for (double h = 1.0; h >= 1e-3 && evals < max_evals; h *= 0.5) {
    bool improved = true;
    while (improved && evals < max_evals) {
      improved = false;
      for (Index i : idx) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> trial = r;
          auto& x = trial[static_cast<std::size_t>(i)];
          x = x > 0.0 ? x * std::exp(dir * h) : (dir > 0 ? h * 1e-3 : 0.0);
          if ((improved = try_move(std::move(trial)))) break;
        }
        if (improved) break;
        for (Index j : idx) {
          const double from = r[static_cast<std::size_t>(i)];
          if (j == i || from == 0.0) continue;
          std::vector<double> trial = r;
          const double moved = std::min(1.0, h) * from;
          trial[static_cast<std::size_t>(i)] -= moved;
          trial[static_cast<std::size_t>(j)] += moved;
          if ((improved = try_move(std::move(trial)))) break;
        }
        if (improved || evals >= max_evals) break;
      }
    }
  }
  return best;
}

// The full shift range, refined from its fidelity optimum, plus the best
// few windows of kWindowShifts consecutive shifts: the trace distance is not
// convex in the weights and narrow windows often beat the full range.
double mm_channel_distance(const Target& t, const Chi& chi) {
  const Index k_min = -(t.levels - 1), k_max = static_cast<Index>(chi.amp.size()) - 1;
  const MatchedFamily f(t, chi, k_min, k_max);
  std::vector<double> r = mm_weights(f);
  if (t.levels > kMixtureMaxLevels) return f.distance(r);
  double best = refine_weights(f, r, 400);
  std::vector<std::pair<double, Index>> windows;
  for (Index b = k_min; b + kWindowShifts - 1 <= k_max; ++b) {
    const MatchedFamily w(t, chi, b, b + kWindowShifts - 1);
    windows.emplace_back(w.distance(mm_weights(w)), b);
  }
  std::sort(windows.begin(), windows.end());
  for (std::size_t i = 0; i < std::min<std::size_t>(windows.size(), kRefinedWindows); ++i) {
    const Index b = windows[i].second;
    const MatchedFamily w(t, chi, b, b + kWindowShifts - 1);
    std::vector<double> rw = mm_weights(w);
    best = std::min(best, refine_weights(w, rw, 150));
    std::vector<double> flat(static_cast<std::size_t>(kWindowShifts), 1.0 / kWindowShifts);
    best = std::min(best, refine_weights(w, flat, 150));
  }
  return best;
}

// Shift mixtures sum_k r_k L_k(chi), where L_k moves |n> to |n - k> when that
// lands in [0, M) and sends every other level to |0>.
struct ShiftFamily {
  Index k_lo = 0;
  Eigen::MatrixXd vecs;      // column k - k_lo: moved amplitudes
  std::vector<double> dump;  // mass sent to |0>
};

ShiftFamily make_shift_family(const Target& t, const Chi& chi, Index k_lo, Index k_hi) {
  ShiftFamily f;
  f.k_lo = k_lo;
  const Index n_in = static_cast<Index>(chi.amp.size());
  f.vecs = Eigen::MatrixXd::Zero(t.levels, k_hi - k_lo + 1);
  f.dump.assign(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
  for (Index k = k_lo; k <= k_hi; ++k) {
    double kept = 0.0;
    for (Index m = 0; m < t.levels; ++m) {
      const Index n = m + k;
      if (n < 0 || n >= n_in) continue;
      f.vecs(m, k - k_lo) = chi.amp[static_cast<std::size_t>(n)];
      kept += chi.amp[static_cast<std::size_t>(n)] * chi.amp[static_cast<std::size_t>(n)];
    }
    f.dump[static_cast<std::size_t>(k - k_lo)] = std::max(0.0, 1.0 - kept);
  }
  return f;
}

Eigen::MatrixXcd mixture_state(const ShiftFamily& f, const std::vector<double>& r, Index first, Index count) {
  const Index m = f.vecs.rows();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(m, m);
  for (Index j = 0; j < count; ++j) {
    const double w = r[static_cast<std::size_t>(j)];
    if (w == 0.0) continue;
    const Index c = first + j - f.k_lo;
    rho += w * (f.vecs.col(c) * f.vecs.col(c).transpose()).cast<std::complex<double>>();
    rho(0, 0) += w * f.dump[static_cast<std::size_t>(c)];
  }
  return rho;
}

// Mirror descent on the convex map r -> D(rho(r), psi) over all shifts.
double mixture_distance(const Target& t, const Chi& chi) {
  const Index n_in = static_cast<Index>(chi.amp.size());
  const ShiftFamily f = make_shift_family(t, chi, -(t.levels - 1), n_in - 1);
  const Index n = f.vecs.cols();
  std::vector<double> r(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Index c = 0; c < n; ++c) {
    const std::complex<double> ov = t.psi.dot(f.vecs.col(c).cast<std::complex<double>>());
    r[static_cast<std::size_t>(c)] = std::norm(ov) + 1e-3 / static_cast<double>(n);
    total += r[static_cast<std::size_t>(c)];
  }
  for (auto& x : r) x /= total;
  const Eigen::MatrixXcd target = t.psi * t.psi.adjoint();
  double best = kInf;
  for (int it = 0; it < 300; ++it) {
    const Eigen::MatrixXcd delta = mixture_state(f, r, f.k_lo, n) - target;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta);
    const Eigen::VectorXd mu = es.eigenvalues();
    best = std::min(best, 0.5 * mu.cwiseAbs().sum());
    Eigen::MatrixXcd sgn_delta = es.eigenvectors() * mu.unaryExpr([](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); })
                                                         .cast<std::complex<double>>()
                                                         .asDiagonal() *
                                 es.eigenvectors().adjoint();
    const double eta = 2.0 / std::sqrt(static_cast<double>(it) + 1.0);
    double z = 0.0;
    for (Index c = 0; c < n; ++c) {
      const Eigen::VectorXcd vc = f.vecs.col(c).cast<std::complex<double>>();
      const double g = 0.5 * ((vc.adjoint() * sgn_delta * vc)(0, 0).real() + f.dump[static_cast<std::size_t>(c)] * sgn_delta(0, 0).real());
      r[static_cast<std::size_t>(c)] *= std::exp(-eta * g);
      z += r[static_cast<std::size_t>(c)];
    }
    for (auto& x : r) x /= z;
  }
  return best + chi.sqrt_tail;
}

// max_s BC(p, shift(P_lambda, s)) over s >= 0.
double best_shifted_poisson_bc(const F64Seq& p, double lambda) {
  const F64Seq pl = poisson(lambda, p.hi() + 1);
  double best = 0.0;
  for (Index s = 0; s <= p.hi(); ++s) {
    double bc = 0.0;
    for (Index n = std::max(p.lo(), s); n <= p.hi(); ++n) bc += std::sqrt(p(n) * pl(n - s));
    best = std::max(best, bc);
  }
  return std::min(best, 1.0);
}

double bc_to_distance(double bc) { return std::sqrt(std::max(0.0, 1.0 - bc * bc)); }

struct Search {
  int budget;
  int used = 0;
  bool exhausted() const { return used >= budget; }
};

struct MaxProbe {
  double dist = kInf;
  const char* family = "";
};

MaxProbe probe_max(const Target& t, double lambda, Search& s) {
  MaxProbe best;
  auto consider = [&](double d, const char* fam) {
    ++s.used;
    if (d < best.dist) best = {d, fam};
  };
  consider(bc_to_distance(best_shifted_poisson_bc(t.p, lambda)), "shifted Poisson profile");
  const Chi chi = make_chi(lambda);
  consider(mm_channel_distance(t, chi), "covariant image of chi_lambda");
  if (t.levels <= kMixtureMaxLevels) consider(mixture_distance(t, chi), "shift mixture of chi_lambda");
  return best;
}

// Bhattacharyya-optimal w >= 0 for w * P_sigma, by the fixed-point update
// w_k <- w_k g_k / sum_j w_j g_j with g = gradient of BC. Shifts range over
// [max(0, lo - band + 1), hi] where band covers P_sigma up to 1e-12 tails.
double best_mixture_bc(const F64Seq& p, double sigma) {
  const Index hi = p.hi(), lo = p.lo();
  const Index band = std::min<Index>(default_poisson_trunc(sigma), hi + 1);
  const F64Seq ps = poisson(sigma, band);
  const Index k0 = std::max<Index>(0, lo - band + 1);
  const Index nk = hi - k0 + 1;
  std::vector<double> w(static_cast<std::size_t>(nk));
  const auto centre = static_cast<Index>(std::lround(sigma));
  double z = 0.0;
  for (Index k = 0; k < nk; ++k) {
    w[static_cast<std::size_t>(k)] = p(k0 + k + centre) + 1e-6;
    z += w[static_cast<std::size_t>(k)];
  }
  for (auto& x : w) x /= z;
  std::vector<double> q(static_cast<std::size_t>(hi - lo + 1)), r(q.size()), g(static_cast<std::size_t>(nk));
  double best = 0.0, prev = -1.0;
  for (int it = 0; it < 600; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (Index k = 0; k < nk; ++k) {
      const double wk = w[static_cast<std::size_t>(k)];
      if (wk == 0.0) continue;
      const Index s = k0 + k;
      for (Index n = std::max(lo, s); n <= std::min(hi, s + band - 1); ++n) q[static_cast<std::size_t>(n - lo)] += wk * ps(n - s);
    }
    double bc = 0.0;
    for (Index n = lo; n <= hi; ++n) {
      const double qn = q[static_cast<std::size_t>(n - lo)];
      bc += std::sqrt(p(n) * qn);
      r[static_cast<std::size_t>(n - lo)] = qn > 0.0 ? std::sqrt(p(n) / qn) : 0.0;
    }
    best = std::max(best, bc);
    if (bc - prev <= 1e-12 * bc) break;
    prev = bc;
    double wg = 0.0;
    for (Index k = 0; k < nk; ++k) {
      const Index s = k0 + k;
      double x = 0.0;
      for (Index n = std::max(lo, s); n <= std::min(hi, s + band - 1); ++n) x += r[static_cast<std::size_t>(n - lo)] * ps(n - s);
      g[static_cast<std::size_t>(k)] = x;
      wg += w[static_cast<std::size_t>(k)] * x;
    }
    if (!(wg > 0.0)) break;
    for (Index k = 0; k < nk; ++k) w[static_cast<std::size_t>(k)] *= g[static_cast<std::size_t>(k)] / wg;
  }
  return std::min(best, 1.0);
}

double ball_bc(double eps) { return std::sqrt(1.0 - eps * eps); }

QfiBracket upper_result(double lambda, int iters, const std::string& note) {
  QfiBracket b;
  b.kind = BoundKind::upper_bound;
  b.upper = 4.0 * lambda;
  b.value = b.upper;
  b.lambda_star = lambda;
  b.lower = 0.0;
  b.iterations = iters;
  b.note = note;
  return b;
}

QfiBracket lower_result(double sigma, int iters, const std::string& note) {
  QfiBracket b;
  b.kind = BoundKind::lower_bound;
  b.lower = 4.0 * sigma;
  b.value = b.lower;
  b.lambda_star = sigma;
  b.upper = kInf;
  b.iterations = iters;
  b.note = note;
  return b;
}

// Generic bisection for the smallest feasible lambda, with hi feasible.
template <class Pred>
double bisect_min(double lo, double hi, double tol, Search& s, Pred&& feasible) {
  while (4.0 * (hi - lo) > tol && !s.exhausted()) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

template <class Pred>
double bisect_max(double lo, double hi, double tol, Search& s, Pred&& feasible) {
  while (4.0 * (hi - lo) > tol && !s.exhausted()) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

void check_grid_support(const Target& t) {
  if (t.p.hi() - t.p.lo() + 1 > 4) throw std::invalid_argument("grid mode: psi must occupy at most 4 levels");
}

// Visits every weight vector on the step-1/50 simplex grid in dimension d.
template <class Fn>
bool for_each_grid_point(int d, Fn&& fn) {
  std::vector<int> c(static_cast<std::size_t>(d), 0);
  std::vector<double> r(static_cast<std::size_t>(d));
  auto rec = [&](auto&& self, int i, int left) -> bool {
    if (i == d - 1) {
      c[static_cast<std::size_t>(i)] = left;
      for (int j = 0; j < d; ++j) r[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] / static_cast<double>(kGridSteps);
      return fn(r);
    }
    for (int x = 0; x <= left; ++x) {
      c[static_cast<std::size_t>(i)] = x;
      if (self(self, i + 1, left - x)) return true;
    }
    return false;
  };
  return rec(rec, 0, kGridSteps);
}

}  // namespace

QfiBracket smooth_f_max(const PureState& psi, double eps, const SmoothOptions& opts) {
  check_eps(eps);
  if (eps == 0.0) return f_max_pure(psi, opts.fisher);
  const Target t = make_target(psi);
  Search s{opts.budget};
  const char* family = "";
  auto feasible = [&](double lambda) {
    const MaxProbe p = probe_max(t, lambda, s);
    if (p.dist <= eps) family = p.family;
    return p.dist <= eps;
  };
  if (feasible(0.0)) return upper_result(0.0, s.used, std::string("symmetric state in the ball (") + family + ")");

  double hi = kInf;
  std::string hi_family;
  // Only a shifted Poisson profile gives the centre itself a finite F_max
  // (4 rate).
  if (psi.factor() && psi.factor()->is_shifted_poisson()) {
    hi = to_double(psi.factor()->rate);
    hi_family = "the state itself";
  }
  if (!std::isfinite(hi)) {
    double guess = std::max(variance(t.p), 0.25);
    for (int i = 0; i < 12 && !s.exhausted(); ++i, guess *= 2.0)
      if (feasible(guess)) {
        hi = guess;
        hi_family = family;
        break;
      }
  }
  if (!std::isfinite(hi)) {
    QfiBracket b = upper_result(kInf, s.used, "no certified candidate within budget");
    b.value = kInf;
    return b;
  }
  const double best = bisect_min(0.0, hi, opts.tol, s, feasible);
  if (best < hi) hi_family = family;
  QfiBracket b = upper_result(best, s.used, "best candidate: " + hi_family);
  return b;
}

QfiBracket smooth_f_min(const PureState& psi, double eps, const SmoothOptions& opts) {
  check_eps(eps);
  if (eps == 0.0) return f_min_pure(psi, opts.fisher);
  const Target t = make_target(psi);
  Search s{opts.budget};
  const double thr = ball_bc(eps) + 1e-12;
  auto feasible = [&](double sigma) {
    ++s.used;
    return best_mixture_bc(t.p, sigma) >= thr;
  };
  // A tagged centre w * P_sigma has F_min = 4 sigma.
  double lo = psi.factor() ? to_double(psi.factor()->rate) : 0.0;
  double hi = std::max(variance(t.p), lo) + 1.0;
  for (int i = 0; i < 20 && feasible(hi) && !s.exhausted(); ++i) {
    lo = hi;
    hi *= 2.0;
  }
  const double best = bisect_max(lo, hi, opts.tol, s, feasible);
  return lower_result(best, s.used, "Poisson-mixture candidate w * P_sigma");
}

QfiBracket smooth_f_max_grid(const PureState& psi, double eps, const SmoothOptions& opts) {
  check_eps(eps);
  const Target t = make_target(psi);
  check_grid_support(t);
  const int d = std::min(3, static_cast<int>(t.p.hi() - t.p.lo() + 1));
  Search s{std::numeric_limits<int>::max()};
  auto feasible = [&](double lambda) {
    ++s.used;
    if (bc_to_distance(best_shifted_poisson_bc(t.p, lambda)) <= eps) return true;
    const Chi chi = make_chi(lambda);
    const Index n_in = static_cast<Index>(chi.amp.size());
    const double lim = eps - chi.sqrt_tail;
    for (Index b = -(t.levels - 1); b <= n_in - 1; ++b) {
      const MatchedFamily f(t, chi, b, b + d - 1);
      const bool hit = for_each_grid_point(d, [&](const std::vector<double>& r) { return f.distance(r) <= lim + chi.sqrt_tail; });
      if (hit) return true;
    }
    return false;
  };
  if (feasible(0.0)) return upper_result(0.0, s.used, "grid: symmetric state in the ball");
  double hi = std::max(variance(t.p), 0.25);
  int guard = 0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (++guard > 8) {
      QfiBracket b = upper_result(kInf, s.used, "grid: no candidate of the grid families lies in the ball");
      b.value = kInf;
      return b;
    }
  }
  const double best = bisect_min(0.0, hi, opts.tol, s, feasible);
  return upper_result(best, s.used, "grid over matched-channel weights and shifted Poisson profiles");
}

QfiBracket smooth_f_min_grid(const PureState& psi, double eps, const SmoothOptions& opts) {
  check_eps(eps);
  const Target t = make_target(psi);
  check_grid_support(t);
  const int d = static_cast<int>(t.p.hi() - t.p.lo() + 1);
  const double thr = ball_bc(eps) + 1e-12;
  Search s{std::numeric_limits<int>::max()};
  auto feasible = [&](double sigma) {
    ++s.used;
    const F64Seq ps = poisson(sigma, t.p.hi() + 1);
    return for_each_grid_point(d, [&](const std::vector<double>& w) {
      double bc = 0.0;
      for (Index n = t.p.lo(); n <= t.p.hi(); ++n) {
        double q = 0.0;
        for (int j = 0; j < d; ++j) {
          const Index k = t.p.lo() + j;
          if (k <= n) q += w[static_cast<std::size_t>(j)] * ps(n - k);
        }
        bc += std::sqrt(t.p(n) * q);
      }
      return bc >= thr;
    });
  };
  double lo = 0.0, hi = variance(t.p) + 1.0;
  for (int i = 0; i < 20 && feasible(hi); ++i) {
    lo = hi;
    hi *= 2.0;
  }
  const double best = bisect_max(lo, hi, opts.tol, s, feasible);
  return lower_result(best, s.used, "grid over Poisson-mixture weights");
}

const char* rate_direction_name(RateDirection d) { return d == RateDirection::sup ? "sup" : "inf"; }

RateDirection parse_rate_direction(std::string_view s) {
  if (s == "sup") return RateDirection::sup;
  if (s == "inf") return RateDirection::inf;
  throw std::invalid_argument("direction must be sup or inf");
}

StateFamily iid_family(const std::string& label, const PureState& base) {
  if (!base.canonical()) throw std::invalid_argument("iid_family: base state must have zero phases");
  StateFamily f;
  f.label = label;
  f.kind = FamilyKind::iid;
  if (base.factor() && base.factor()->is_shifted_poisson()) {
    const PoissonFactor fac = *base.factor();
    f.generator = [fac](int m) {
      if (m < 1) throw std::invalid_argument("family: m must be >= 1");
      const Rational rate = fac.rate * m;
      const Index shift = fac.mixing.lo() * m;
      return poisson_mixture_state(rate, RatSeq::delta(shift), shift + default_poisson_trunc(rate.get_d()));
    };
    return f;
  }
  const RatDist p = RatDist::make_complete(truncated_profile(base));
  f.generator = [p](int m) {
    if (m < 1) throw std::invalid_argument("family: m must be >= 1");
    return PureState::from_exact_profile(iid_power(p, m).seq);
  };
  return f;
}

StateFamily family_from_spec(const std::string& spec) {
  if (spec == "iid:coin") return iid_family(spec, coherence_bit());
  if (spec.rfind("iid:poisson:", 0) == 0) {
    const Rational rate = parse_rational(spec.substr(12));
    if (sgn(rate) <= 0) throw std::invalid_argument("family: Poisson rate must be > 0");
    return iid_family(spec, poisson_profile_state(rate));
  }
  if (spec == "eigen") {
    StateFamily f;
    f.label = spec;
    f.kind = FamilyKind::custom;
    f.generator = [](int m) { return eigenstate(m); };
    return f;
  }
  throw std::invalid_argument("unknown family: " + spec);
}

RateEstimate spectral_rate(const StateFamily& fam, double eps, const std::vector<int>& ms, RateDirection dir,
                           const SmoothOptions& opts) {
  if (ms.empty()) throw std::invalid_argument("spectral_rate: ms is empty");
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (ms[i] < 1 || (i > 0 && ms[i] <= ms[i - 1])) throw std::invalid_argument("spectral_rate: ms must be increasing and >= 1");
  if (!fam.generator) throw std::invalid_argument("spectral_rate: family has no generator");
  RateEstimate r;
  r.eps = eps;
  r.direction = dir;
  for (int m : ms) {
    const PureState psi = fam.generator(m);
    RatePoint pt;
    pt.m = m;
    pt.raw = dir == RateDirection::sup ? smooth_f_max(psi, eps, opts) : smooth_f_min(psi, eps, opts);
    if (!std::isfinite(pt.raw.value)) throw std::runtime_error("spectral_rate: non-finite value at m = " + std::to_string(m));
    pt.per_m = pt.raw.value / m;
    r.per_m.push_back(std::move(pt));
  }
  const std::size_t k = std::min<std::size_t>(3, r.per_m.size());
  double lo = kInf, hi = -kInf, sum = 0.0;
  for (std::size_t i = r.per_m.size() - k; i < r.per_m.size(); ++i) {
    sum += r.per_m[i].per_m;
    lo = std::min(lo, r.per_m[i].per_m);
    hi = std::max(hi, r.per_m[i].per_m);
  }
  r.extrapolated = sum / static_cast<double>(k);
  r.spread = hi - lo;
  return r;
}

std::vector<TpCertificateRow> iid_tp_certificate(const F64Dist& p, const std::vector<int>& ms) {
  if (!p.complete()) throw std::invalid_argument("iid_tp_certificate: p must have finite support");
  const F64Seq pmf = p.probabilities();
  const BarbourParams params = barbour_params_iid(pmf);
  const double mu = mean(pmf), var = variance(pmf);
  std::vector<TpCertificateRow> rows;
  for (int m : ms) {
    const F64Dist q = iid_power(p, m);
    const double md = static_cast<double>(m);
    const F64Dist probe = translated_poisson(md * mu, md * var);
    const Index s = probe.seq.lo();
    const Index n = std::max<Index>(probe.seq.hi() - s + 1, q.seq.hi() - s + 1);
    const F64Dist tp = translated_poisson(md * mu, md * var, n);
    double diff = tp.tail_mass;
    for (Index i = std::min(q.seq.lo(), tp.seq.lo()); i <= std::max(q.seq.hi(), tp.seq.hi()); ++i)
      diff += std::fabs(q.seq(i) - tp.seq(i));
    TpCertificateRow row;
    row.m = m;
    row.dtv = 0.5 * diff;
    row.bound = barbour_bound(params, m);
    row.ok = row.dtv <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace asym
