// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace asym {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw JsonError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw JsonError(std::string("missing key \"") + key + "\"");
  return *it;
}

Index int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw JsonError(std::string("key \"") + key + "\" must be an integer");
  return v.get<Index>();
}

const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw JsonError(std::string("key \"") + key + "\" must be an array");
  return v;
}

std::pair<double, double> pair_of(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw JsonError(std::string(what) + " entries must be [x, y] pairs");
  return {number_from_json(j[0]), number_from_json(j[1])};
}

Rational rational_of(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw JsonError(e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return to_rational(j.get<double>());
  throw JsonError("expected a rational string or number");
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is the 1-based offset of the offending byte.
    const std::size_t pos = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON";
    throw JsonError(msg.str(), line, col);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return to_double(rational_of(j));
  }
  throw JsonError("expected a number");
}

Json to_json(const RatSeq& s) {
  Json v = Json::array();
  for (const auto& x : s.values()) v.push_back(format_rational(x));
  return Json{{"offset", s.lo()}, {"values", v}};
}

Json to_json(const F64Seq& s) {
  Json v = Json::array();
  for (double x : s.values()) v.push_back(number_to_json(x));
  return Json{{"offset", s.lo()}, {"values", v}};
}

RatSeq rat_seq_from_json(const Json& j) {
  const Index off = int_field(j, "offset");
  std::vector<Rational> v;
  for (const auto& x : array_field(j, "values")) v.push_back(rational_of(x));
  return RatSeq(off, std::move(v));
}

F64Seq f64_seq_from_json(const Json& j) {
  const Index off = int_field(j, "offset");
  std::vector<double> v;
  for (const auto& x : array_field(j, "values")) v.push_back(number_from_json(x));
  return F64Seq(off, std::move(v));
}

Json to_json(const PureState& psi) {
  Json amps = Json::array();
  for (const auto& a : psi.amps()) amps.push_back(Json::array({a.modulus, a.phase}));
  Json j{{"n_trunc", psi.n_trunc()}, {"amps", amps}};
  if (psi.exact_profile()) j["profile"] = to_json(*psi.exact_profile());
  if (psi.factor()) {
    j["poisson_rate"] = format_rational(psi.factor()->rate);
    j["mixing"] = to_json(psi.factor()->mixing);
  }
  return j;
}

PureState state_from_json(const Json& j) {
  if (j.is_object() && !j.contains("amps")) {
    // Shorthand forms: a Poisson tag or an exact profile, amplitudes derived.
    const Index n = j.contains("n_trunc") ? int_field(j, "n_trunc") : 0;
    if (j.contains("poisson_rate"))
      return poisson_mixture_state(rational_of(j["poisson_rate"]),
                                   j.contains("mixing") ? rat_seq_from_json(j["mixing"]) : RatSeq::delta(0), n);
    if (j.contains("profile")) return PureState::from_exact_profile(rat_seq_from_json(j["profile"]));
    throw JsonError("state: need amps, poisson_rate or profile");
  }
  const Index n = int_field(j, "n_trunc");
  const Json& a = array_field(j, "amps");
  if (n < 1 || static_cast<Index>(a.size()) > n) throw JsonError("state: need 1 <= len(amps) <= n_trunc");
  std::vector<Amplitude> amps(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [m, ph] = pair_of(a[i], "amps");
    amps[i] = {m, ph};
  }
  PureState psi = PureState::from_polar(std::move(amps));
  if (j.contains("profile")) {
    const RatSeq p = rat_seq_from_json(j["profile"]);
    RatDist::make_complete(p);
    psi = psi.with_exact_profile(p);
  }
  if (j.contains("poisson_rate")) {
    PoissonFactor f{rational_of(j["poisson_rate"]), j.contains("mixing") ? rat_seq_from_json(j["mixing"]) : RatSeq::delta(0)};
    if (sgn(f.rate) < 0) throw std::invalid_argument("state: negative Poisson rate");
    psi = psi.with_factor(std::move(f));
  }
  return psi;
}

Json to_json(const GeneralSpectrum& g) {
  Json lv = Json::array();
  for (const auto& l : g.levels) lv.push_back(Json::array({l.energy, l.weight}));
  return Json{{"period", g.period}, {"levels", lv}};
}

GeneralSpectrum spectrum_from_json(const Json& j) {
  GeneralSpectrum g;
  g.period = number_from_json(field(j, "period"));
  for (const auto& x : array_field(j, "levels")) {
    const auto [e, w] = pair_of(x, "levels");
    g.levels.push_back({e, w});
  }
  return g;
}

Json to_json(const CovariantChannel& e) {
  Json ks = Json::array();
  for (const auto& k : e.kraus) {
    Json c = Json::array();
    for (const auto& z : k.coeffs) c.push_back(Json::array({z.real(), z.imag()}));
    ks.push_back(Json{{"shift", k.shift}, {"coeffs", c}});
  }
  return Json{{"in_trunc", e.in_trunc}, {"out_trunc", e.out_trunc}, {"kraus", ks}};
}

CovariantChannel channel_from_json(const Json& j) {
  CovariantChannel e;
  e.in_trunc = int_field(j, "in_trunc");
  Index top = 0;
  for (const auto& k : array_field(j, "kraus")) {
    KrausOp op;
    op.shift = int_field(k, "shift");
    for (const auto& c : array_field(k, "coeffs")) {
      const auto [re, im] = pair_of(c, "coeffs");
      op.coeffs.emplace_back(re, im);
    }
    for (Index n = 0; n < static_cast<Index>(op.coeffs.size()); ++n)
      if (op.coeffs[static_cast<std::size_t>(n)] != std::complex<double>{}) top = std::max(top, n - op.shift);
    e.kraus.push_back(std::move(op));
  }
  e.out_trunc = j.contains("out_trunc") ? int_field(j, "out_trunc") : top + 1;
  e.validate();
  return e;
}

Json to_json(const DensityMatrix& rho) {
  Json rows = Json::array();
  for (Index i = 0; i < rho.dim(); ++i) {
    Json r = Json::array();
    for (Index k = 0; k < rho.dim(); ++k) r.push_back(Json::array({rho.rho(i, k).real(), rho.rho(i, k).imag()}));
    rows.push_back(r);
  }
  return Json{{"rho", rows}, {"energies", rho.energies}};
}

DensityMatrix density_from_json(const Json& j) {
  const Json& rows = array_field(j, "rho");
  const Index d = static_cast<Index>(rows.size());
  Eigen::MatrixXcd m(d, d);
  for (Index i = 0; i < d; ++i) {
    const Json& r = rows[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Index>(r.size()) != d) throw JsonError("rho must be square");
    for (Index k = 0; k < d; ++k) {
      const auto [re, im] = pair_of(r[static_cast<std::size_t>(k)], "rho");
      m(i, k) = {re, im};
    }
  }
  std::vector<Index> e;
  if (j.contains("energies")) {
    for (const auto& x : array_field(j, "energies")) {
      if (!x.is_number_integer()) throw JsonError("energies must be integers");
      e.push_back(x.get<Index>());
    }
  } else {
    for (Index i = 0; i < d; ++i) e.push_back(i);
  }
  return DensityMatrix::make(std::move(m), std::move(e));
}

Json to_json(const QfiBracket& b) {
  return Json{{"value", number_to_json(b.value)},
              {"kind", bound_kind_name(b.kind)},
              {"lambda_star", number_to_json(b.lambda_star)},
              {"iterations", b.iterations},
              {"lower", number_to_json(b.lower)},
              {"upper", number_to_json(b.upper)},
              {"window", Json::array({b.window_lo, b.window_hi})},
              {"window_value", number_to_json(b.window_value)},
              {"note", b.note}};
}

QfiBracket bracket_from_json(const Json& j) {
  QfiBracket b;
  b.value = number_from_json(field(j, "value"));
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "exact") b.kind = BoundKind::exact;
  else if (kind == "upper_bound") b.kind = BoundKind::upper_bound;
  else if (kind == "lower_bound") b.kind = BoundKind::lower_bound;
  else if (kind == "estimate") b.kind = BoundKind::estimate;
  else throw JsonError("unknown bound kind " + kind);
  b.lambda_star = number_from_json(field(j, "lambda_star"));
  b.iterations = static_cast<int>(int_field(j, "iterations"));
  b.lower = number_from_json(field(j, "lower"));
  b.upper = number_from_json(field(j, "upper"));
  const Json& w = array_field(j, "window");
  if (w.size() != 2) throw JsonError("window must be [lo, hi]");
  b.window_lo = w[0].get<Index>();
  b.window_hi = w[1].get<Index>();
  b.window_value = number_from_json(field(j, "window_value"));
  b.note = field(j, "note").get<std::string>();
  return b;
}

template <class T>
Json to_json(const AMajorVerdict<T>& v) {
  Json j{{"holds", v.holds},
         {"certified", v.certified},
         {"window_holds", v.window_holds},
         {"marginal", v.marginal},
         {"witness_log_scale", number_to_json(v.witness_log_scale)},
         {"min_violation", number_to_json(v.min_violation)},
         {"window", Json::array({v.window_lo, v.window_hi})},
         {"witness_complete", v.witness_complete},
         {"certificate", v.certificate}};
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  return j;
}

template Json to_json(const AMajorVerdict<Rational>&);
template Json to_json(const AMajorVerdict<double>&);

namespace {

enum class DocKind { state, seq, spectrum };

DocKind doc_kind(const Json& j) {
  if (!j.is_object()) throw JsonError("expected a JSON object");
  if (j.contains("amps") || j.contains("poisson_rate") || (j.contains("profile") && !j.contains("values")))
    return DocKind::state;
  if (j.contains("offset") && j.contains("values")) return DocKind::seq;
  if (j.contains("period") && j.contains("levels")) return DocKind::spectrum;
  throw JsonError("document is not a state, sequence or spectrum");
}

}  // namespace

F64Dist f64_distribution_from_json(const Json& j) {
  switch (doc_kind(j)) {
    case DocKind::state: return state_from_json(j).energy_distribution<double>();
    case DocKind::seq: return F64Dist::make_complete(f64_seq_from_json(j));
    case DocKind::spectrum: return reduce_spectrum(spectrum_from_json(j));
  }
  throw JsonError("unreachable");
}

RatDist rat_distribution_from_json(const Json& j) {
  switch (doc_kind(j)) {
    case DocKind::state: return state_from_json(j).energy_distribution<Rational>();
    case DocKind::seq: return RatDist::make_complete(rat_seq_from_json(j));
    case DocKind::spectrum: {
      const F64Dist d = reduce_spectrum(spectrum_from_json(j));
      RatSeq s = to_rational(d.seq);
      const Rational total = mass(s);
      return RatDist::make_complete(scale(s, Rational(1 / total)));
    }
  }
  throw JsonError("unreachable");
}

}  // namespace asym
