// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asym/amajor.hpp"
#include "asym/channels.hpp"
#include "asym/entbridge.hpp"
#include "asym/qfi.hpp"
#include "asym/spectra.hpp"
#include "support.hpp"

using namespace asym;
using asym::testing::random_phases;
using asym::testing::random_rat_dist;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

RatDist complete(const RatSeq& s) { return RatDist::make_complete(s); }

// p_psi = w * p_phi with random phases on both.
std::pair<PureState, PureState> feasible_pair(std::mt19937_64& rng) {
  const RatSeq q = random_rat_dist(rng, 5);
  const RatSeq w = random_rat_dist(rng, 5);
  const RatSeq p = convolve(w, q);
  return {PureState::from_exact_profile(p, random_phases(rng, p.size())),
          PureState::from_exact_profile(q, random_phases(rng, q.size()))};
}

Outcome poisson_reciprocal() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const char* l : {"1/2", "1", "3"}) {
    const Rational lam = parse_rational(l);
    // P_lam = e^{-lam} K_lam, so its reciprocal is e^{lam} K_{-lam} = P_{-lam}.
    const RatDist p = poisson_distribution<Rational>(lam, 40);
    const auto r = reciprocal(p.seq, 39);
    ok = ok && p.log_scale == -lam.get_d() && r.identity_hi >= 39 && r.seq == poisson_kernel(Rational(-lam), 40);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && secs < 1.0, "40 entries exact for lambda in {1/2, 1, 3}, " + fmt("%.3f s", secs)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  int disagreements = 0, holds = 0;
  const int pairs = 500;
  for (int i = 0; i < pairs; ++i) {
    const RatSeq q = random_rat_dist(rng, 4, i % 3);
    RatSeq p = i % 2 == 0 ? convolve(random_rat_dist(rng, 5, (i / 2) % 3), q) : random_rat_dist(rng, 8, (i / 3) % 4);
    if (p.size() > 8) p = random_rat_dist(rng, 8);
    const auto v = a_majorizes(complete(p), complete(q));
    const auto lp = a_majorizes_bruteforce(complete(p), complete(q));
    if (!v.certified || v.holds != lp.has_value() || (lp && *v.witness != *lp)) ++disagreements;
    holds += v.holds;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {disagreements == 0 && secs < 60.0, std::to_string(pairs) + " pairs, " + std::to_string(holds) +
                                                  " feasible, " + std::to_string(disagreements) + " disagreements, " +
                                                  fmt("%.2f s", secs)};
}

Outcome poisson_ordering() {
  const std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(4)};
  int wrong = 0;
  for (const auto& a : grid)
    for (const auto& b : grid) {
      const auto v = a_majorizes(poisson_distribution<Rational>(a, 60), poisson_distribution<Rational>(b, 60));
      if (!v.certified || v.holds != (a >= b)) ++wrong;
    }
  return {wrong == 0, "25 certified verdicts, " + std::to_string(wrong) + " wrong"};
}

Outcome qfi_collapse() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool exact = true;
  for (const char* l : {"1/2", "1", "2", "5"}) {
    const Rational lam = parse_rational(l);
    const PureState chi = poisson_profile_state(lam);
    const QfiBracket hi = f_max_pure(chi), lo = f_min_pure(chi);
    exact = exact && hi.kind == BoundKind::exact && lo.kind == BoundKind::exact;
    worst = std::max({worst, std::fabs(hi.value - 4 * lam.get_d()), std::fabs(lo.value - 4 * lam.get_d())});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {exact && worst <= 1e-4 && secs < 30.0,
          "max |F - 4 lambda| = " + fmt("%.2e", worst) + (exact ? ", certified" : ", NOT certified") + ", " +
              fmt("%.2f s", secs)};
}

Outcome sandwich_monotonicity() {
  std::mt19937_64 rng(1005);
  const FisherOptions o{Backend::rational, 1e-6, 64, {}};
  std::uniform_int_distribution<int> rate(1, 12);
  auto random_tagged = [&] { return poisson_mixture_state(Rational(rate(rng), 4), random_rat_dist(rng, 3)); };
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const PureState psi = i % 2 == 0 ? asym::testing::random_state(rng, 5) : random_tagged();
    const double f = qfi_pure(psi);
    const QfiBracket hi = f_max_pure(psi, o), lo = f_min_pure(psi, o);
    if (hi.upper < f - 1e-6 || lo.lower > f + 1e-6 || hi.lower > hi.upper || lo.lower > lo.upper) ++violations;
  }
  int pairs = 0;
  while (pairs < 200) {
    PureState psi, phi;
    if (pairs % 2 == 0) {
      phi = random_tagged();
      psi = poisson_mixture_state(phi.factor()->rate + Rational(pairs % 5, 4),
                                  convolve(random_rat_dist(rng, 3), phi.factor()->mixing));
    } else {
      const RatSeq q = random_rat_dist(rng, 4);
      phi = PureState::from_exact_profile(q);
      psi = PureState::from_exact_profile(convolve(random_rat_dist(rng, 3), q));
    }
    if (!one_shot_convertible<Rational>(psi, phi).holds) continue;
    ++pairs;
    const QfiBracket ma = f_max_pure(psi, o), mb = f_max_pure(phi, o);
    const QfiBracket na = f_min_pure(psi, o), nb = f_min_pure(phi, o);
    if (ma.upper < mb.lower - 1e-6 || na.upper < nb.lower - 1e-6) ++violations;
  }
  return {violations == 0, "200 states, 200 convertible pairs, " + std::to_string(violations) + " violations"};
}

Outcome conversion_soundness() {
  std::mt19937_64 rng(1006);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto [psi, phi] = feasible_pair(rng);
    const CovariantChannel e = build_conversion(psi, phi);
    const CovarianceReport r = verify_covariant_report(e);
    const double d = trace_distance(apply(e, DensityMatrix::from_pure(psi)), phi);
    worst = std::max(worst, d);
    if (r.completeness_error > 1e-10 || !r.structural || !r.sampled || d > 1e-9) ++bad;
  }
  return {bad == 0, "200 pairs, max distance " + fmt("%.2e", worst) + ", " + std::to_string(bad) + " failures"};
}

Outcome purification_check() {
  std::mt19937_64 rng(1007);
  const std::vector<Rational> rates{Rational(1, 2), Rational(1), Rational(2)};
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Rational& lam = rates[static_cast<std::size_t>(i % 3)];
    const Index n = default_poisson_trunc(lam.get_d());
    const CovariantChannel e = random_covariant_channel(n, n + 2, 1 + i % 4, -2, 3, rng);
    const Dilation d = purification_profile_check(e, lam);
    worst = std::max(worst, d.tv_to_poisson);
    if (!d.ok || d.tv_to_poisson > std::max(d.truncation_tail, 1e-12) || d.tv_to_poisson >= 1e-10) ++bad;
  }
  return {bad == 0, "100 channels, max d_TV " + fmt("%.2e", worst) + ", " + std::to_string(bad) + " failures"};
}

Outcome smoothing_lemma() {
  std::mt19937_64 rng(1008);
  std::normal_distribution<double> g(0.0, 1.0);
  int triples = 0, bad = 0, attempts = 0;
  while (triples < 100 && attempts < 1000) {
    ++attempts;
    const auto [psi, phi] = feasible_pair(rng);
    const CovariantChannel e = build_conversion(psi, phi);
    std::vector<std::complex<double>> v = psi.vector();
    const double delta = 0.002 + 0.01 * (attempts % 5);
    double s = 0.0;
    for (auto& z : v) s += std::norm(z += delta * std::complex<double>(g(rng), g(rng)));
    for (auto& z : v) z /= std::sqrt(s);
    const SmoothingWitness w = smoothing_witness(PureState::from_amplitudes(v), phi, e);
    if (w.eps > 0.1) continue;
    ++triples;
    if (w.dist > smoothing_bound(w.eps) + 1e-12 || !w.majorizes) ++bad;
  }
  return {triples == 100 && bad == 0, std::to_string(triples) + " triples, " + std::to_string(bad) + " failures"};
}

Outcome tp_certificate() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = iid_tp_certificate(F64Dist::make_complete(F64Seq(0, {0.5, 0.5})), {16, 64, 256, 1024});
  bool ok = rows.size() == 4;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && r.ok && r.dtv <= r.bound;
    detail += "m=" + std::to_string(r.m) + " " + fmt("%.4f", r.dtv) + "<=" + fmt("%.4f", r.bound) + "; ";
  }
  ok = ok && rows.back().dtv < 0.03;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && secs < 120.0, detail + fmt("%.2f s", secs)};
}

Outcome iid_consistency() {
  std::vector<int> ms;
  for (int m = 8; m <= 64; m += 8) ms.push_back(m);
  struct Case {
    const char* family;
    RateDirection dir;
    double lo, hi;
  };
  const std::vector<Case> cases{{"iid:coin", RateDirection::sup, 0.85, 1.15},
                                {"iid:coin", RateDirection::inf, 0.85, 1.15},
                                {"iid:poisson:1", RateDirection::sup, 3.8, 4.2},
                                {"iid:poisson:1", RateDirection::inf, 3.8, 4.2}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const RateEstimate r = spectral_rate(family_from_spec(c.family), 0.05, ms, c.dir);
    const bool in = r.extrapolated >= c.lo && r.extrapolated <= c.hi;
    ok = ok && in;
    detail += std::string(c.family) + " " + rate_direction_name(c.dir) + " " + fmt("%.4f", r.extrapolated) +
              (in ? "" : " (outside)") + "; ";
  }
  return {ok, detail};
}

Outcome entanglement_bridge() {
  std::mt19937_64 rng(1011);
  std::normal_distribution<double> g(0.0, 1.0);
  int sandwich_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const Index d = 1 + i % 4;
    Eigen::MatrixXcd a(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) a(r, c) = {g(rng), g(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    std::vector<Index> en(static_cast<std::size_t>(d), 0);
    const Entropies e = entropies(DensityMatrix::make(rho, en));
    if (e.s_max < e.s - 1e-12 || e.s < e.s_min - 1e-12) ++sandwich_bad;
  }
  std::uniform_int_distribution<int> u(0, 5);
  auto vec = [&](int dim) {
    std::vector<Rational> v(static_cast<std::size_t>(dim));
    Rational s(0);
    while (s == 0) {
      s = 0;
      for (auto& x : v) s += (x = u(rng));
    }
    for (auto& x : v) x /= s;
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  };
  auto schmidt = [](const std::vector<Rational>& v) {
    std::vector<double> d;
    for (const auto& x : v) d.push_back(x.get_d());
    return SchmidtVector::make(std::move(d));
  };
  int disagreements = 0;
  const int pairs = 300;
  for (int i = 0; i < pairs; ++i) {
    const int dim = 1 + i % 4;
    const auto p = vec(dim), q = vec(dim);
    if (majorizes(schmidt(p), schmidt(q)) != majorizes_hlp(p, q)) ++disagreements;
  }
  const auto plateau = iid_smooth_entropy_rates({0.5, 0.5}, {20}, 0.05);
  const double rate = plateau.front().s_max_rate;
  return {sandwich_bad == 0 && disagreements == 0 && std::fabs(rate - 1.0) <= 0.1,
          std::to_string(sandwich_bad) + " sandwich violations, " + std::to_string(disagreements) + "/" +
              std::to_string(pairs) + " HLP disagreements, S_max^eps/m at m=20 " + fmt("%.4f", rate)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("asymcalc_acceptance_" + std::to_string(rd()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "psi.json") << R"({"profile": {"offset": 0, "values": ["1/4", "1/2", "1/4"]}})";
    std::ofstream(dir / "phi.json") << R"({"profile": {"offset": 0, "values": ["1/2", "1/2"]}})";
  }
  const std::string psi = (dir / "psi.json").string(), phi = (dir / "phi.json").string();
  const std::vector<std::string> commands{
      "rates --family iid:coin --ms 8,16,24 --eps 0.05 --seed 7",
      "bridge --demo correspondence --pairs 50 --seed 7",
      "certify-tp --ms 16,64",
      "convert " + psi + " " + phi + " --seed 7",
      "smooth " + psi + " --eps 0.1 --seed 7",
      "fmax " + psi + " --seed 7",
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / ("out" + std::to_string(i) + "_" + std::to_string(k));
      const std::string cmd = std::string(ASYMCALC_BIN) + " " + commands[i] + " --out " + out.string();
      if (std::system(cmd.c_str()) != 0) break;
      outs[k] = slurp(out);
    }
    if (!outs[0].empty() && outs[0] == outs[1]) ++identical;
  }
  fs::remove_all(dir);
  const int n = static_cast<int>(commands.size());
  return {identical == n, std::to_string(identical) + "/" + std::to_string(n) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Poisson reciprocal identity", poisson_reciprocal},
      {"a-majorization oracle equivalence", oracle_equivalence},
      {"Poisson ordering", poisson_ordering},
      {"QFI collapse on Poisson profiles", qfi_collapse},
      {"sandwich and monotonicity", sandwich_monotonicity},
      {"conversion-channel soundness", conversion_soundness},
      {"purification profile", purification_check},
      {"smoothing witness", smoothing_lemma},
      {"translated-Poisson certificate", tp_certificate},
      {"i.i.d. consistency of spectral rates", iid_consistency},
      {"entanglement bridge", entanglement_bridge},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
