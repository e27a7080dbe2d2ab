// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "asym/channels.hpp"
#include "asym/entbridge.hpp"
#include "asym/json_io.hpp"
#include "asym/qfi.hpp"
#include "asym/spectra.hpp"

namespace asym::cli {

namespace {

// Error that maps straight to an exit code.
struct CommandError : std::runtime_error {
  int code;
  CommandError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void require_inputs(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.size() != n)
    throw CommandError(kPrecondition, cfg.command + ": expected " + std::to_string(n) + " input file(s), got " +
                                          std::to_string(cfg.inputs.size()));
}

// A Poisson-tagged state re-materialised at the requested truncation.
PureState retrunc(const PureState& psi, const RunConfig& cfg) {
  if (!cfg.trunc || !psi.factor()) return psi;
  return poisson_mixture_state(psi.factor()->rate, psi.factor()->mixing, *cfg.trunc);
}

bool is_density(const Json& j) { return j.is_object() && j.contains("rho"); }

PureState load_state(const Json& j, const RunConfig& cfg) { return retrunc(state_from_json(j), cfg); }

template <class T>
Distribution<T> load_distribution(const Json& j, const RunConfig& cfg) {
  if (j.is_object() && j.contains("amps")) return load_state(j, cfg).energy_distribution<T>();
  if constexpr (BackendOf<T>::value == Backend::rational) return rat_distribution_from_json(j);
  else return f64_distribution_from_json(j);
}

FisherOptions fisher_options(const RunConfig& cfg) {
  FisherOptions o;
  o.backend = cfg.backend;
  o.tol = cfg.tol;
  if (cfg.window) o.extension = *cfg.window;
  return o;
}

AMajorOptions amajor_options(const RunConfig& cfg) {
  AMajorOptions o;
  if (cfg.window) o.extension = *cfg.window;
  return o;
}

int bracket_exit(const QfiBracket& b) { return b.kind == BoundKind::estimate ? kCertification : kOk; }

struct Output {
  std::string text;
  int code = kOk;
};

Output cmd_qfi(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const Json j = read_json_file(cfg.inputs[0]);
  Json r;
  if (is_density(j)) {
    r = Json{{"input", "mixed"}, {"qfi", number_to_json(qfi_mixed(density_from_json(j)))}};
  } else {
    r = Json{{"input", "pure"}, {"qfi", number_to_json(qfi_pure(load_state(j, cfg)))}};
  }
  r["kind"] = bound_kind_name(BoundKind::exact);
  return {dump_json(r)};
}

Output cmd_fmax(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const Json j = read_json_file(cfg.inputs[0]);
  QfiBracket b;
  if (is_density(j)) {
    MixedSearchOptions o;
    o.seed = cfg.seed;
    o.fisher.tol = std::max(cfg.tol, 1e-6);
    b = f_max_mixed_upper(density_from_json(j), o);
  } else {
    b = f_max_pure(load_state(j, cfg), fisher_options(cfg));
  }
  Json r = to_json(b);
  r["backend"] = backend_name(cfg.backend);
  return {dump_json(r), bracket_exit(b)};
}

Output cmd_fmin(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const Json j = read_json_file(cfg.inputs[0]);
  if (is_density(j)) throw CommandError(kPrecondition, "fmin: input must be a pure state");
  const QfiBracket b = f_min_pure(load_state(j, cfg), fisher_options(cfg));
  Json r = to_json(b);
  r["backend"] = backend_name(cfg.backend);
  return {dump_json(r), bracket_exit(b)};
}

template <class T>
Output amaj_with(const RunConfig& cfg, const Json& pj, const Json& qj) {
  const auto v = a_majorizes(load_distribution<T>(pj, cfg), load_distribution<T>(qj, cfg), amajor_options(cfg));
  Json r = to_json(v);
  r["backend"] = backend_name(cfg.backend);
  const bool uncertain = v.marginal && BackendOf<T>::value == Backend::f64;
  return {dump_json(r), uncertain ? kCertification : kOk};
}

Output cmd_amaj(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const Json pj = read_json_file(cfg.inputs[0]);
  const Json qj = read_json_file(cfg.inputs[1]);
  if (cfg.backend == Backend::rational) return amaj_with<Rational>(cfg, pj, qj);
  return amaj_with<double>(cfg, pj, qj);
}

Output cmd_convert(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const PureState psi = load_state(read_json_file(cfg.inputs[0]), cfg);
  const PureState phi = load_state(read_json_file(cfg.inputs[1]), cfg);
  Json verdict;
  bool holds = false, certified = false, marginal = false;
  if (cfg.backend == Backend::rational) {
    const auto v = one_shot_convertible<Rational>(psi, phi, amajor_options(cfg));
    verdict = to_json(v);
    holds = v.holds;
    certified = v.certified;
  } else {
    const auto v = one_shot_convertible<double>(psi, phi, amajor_options(cfg));
    verdict = to_json(v);
    holds = v.holds;
    certified = v.certified;
    marginal = v.marginal;
  }
  Json r{{"backend", backend_name(cfg.backend)}, {"convertible", holds && certified}, {"verdict", verdict}};
  if (!holds || !certified) {
    r["channel"] = nullptr;
    return {dump_json(r), (marginal || (holds && !certified)) ? kCertification : kOk};
  }
  const CovariantChannel e = build_conversion(psi, phi, amajor_options(cfg));
  const DensityMatrix out = apply(e, DensityMatrix::from_pure(psi));
  const double dist = trace_distance(out, phi);
  const bool covariant = verify_covariant(e, 4, cfg.seed);
  r["channel"] = to_json(e);
  r["output_distance"] = number_to_json(dist);
  r["covariant"] = covariant;
  return {dump_json(r), (covariant && dist <= 1e-9) ? kOk : kCertification};
}

Output cmd_channel_verify(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const CovariantChannel e = channel_from_json(read_json_file(cfg.inputs[0]));
  const CovarianceReport rep = verify_covariant_report(e, 4, cfg.seed);
  Json r{{"completeness_error", number_to_json(rep.completeness_error)},
         {"structural", rep.structural},
         {"sampled", rep.sampled},
         {"max_sampled_deviation", number_to_json(rep.max_sampled_deviation)},
         {"agree", rep.agree()},
         {"covariant", rep.structural && rep.sampled}};
  return {dump_json(r), rep.agree() ? kOk : kCertification};
}

Output cmd_smooth(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const PureState psi = load_state(read_json_file(cfg.inputs[0]), cfg);
  SmoothOptions o;
  o.tol = std::max(cfg.tol, 1e-6);
  const QfiBracket hi = smooth_f_max(psi, cfg.eps, o);
  const QfiBracket lo = smooth_f_min(psi, cfg.eps, o);
  Json r{{"eps", cfg.eps}, {"f_max", to_json(hi)}, {"f_min", to_json(lo)}};
  return {dump_json(r), std::max(bracket_exit(hi), bracket_exit(lo))};
}

// Manifest: {"label": "...", "states": [{"m": 8, "path": "psi8.json"}, ...]},
// paths relative to the manifest.
StateFamily manifest_family(const std::string& path, const RunConfig& cfg) {
  const Json j = read_json_file(path);
  const auto base = std::filesystem::path(path).parent_path();
  auto files = std::make_shared<std::map<int, std::string>>();
  if (!j.is_object() || !j.contains("states") || !j["states"].is_array())
    throw JsonError("manifest: expected {\"states\": [...]}");
  for (const auto& s : j["states"]) {
    if (!s.is_object() || !s.contains("m") || !s.contains("path")) throw JsonError("manifest: entries need m and path");
    (*files)[s["m"].get<int>()] = (base / s["path"].get<std::string>()).string();
  }
  StateFamily f;
  f.label = j.value("label", path);
  f.kind = FamilyKind::custom;
  f.generator = [files, cfg](int m) {
    const auto it = files->find(m);
    if (it == files->end()) throw std::invalid_argument("manifest: no state for m = " + std::to_string(m));
    return load_state(read_json_file(it->second), cfg);
  };
  return f;
}

StateFamily load_family(const RunConfig& cfg, const std::string& fallback) {
  const std::string spec = cfg.family.empty() ? fallback : cfg.family;
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") return manifest_family(spec, cfg);
  return family_from_spec(spec);
}

std::vector<int> ms_or(const RunConfig& cfg, std::vector<int> fallback) { return cfg.ms.empty() ? fallback : cfg.ms; }

Output cmd_rates(const RunConfig& cfg) {
  if (!cfg.inputs.empty()) throw CommandError(kPrecondition, "rates: takes no input files");
  const StateFamily fam = load_family(cfg, "iid:coin");
  SmoothOptions o;
  o.tol = std::max(cfg.tol, 1e-6);
  const RateEstimate est =
      spectral_rate(fam, cfg.eps, ms_or(cfg, {8, 16, 24, 32, 40, 48, 56, 64}), parse_rate_direction(cfg.dir), o);
  std::ostringstream csv;
  csv << "m,raw_value,per_m,bound_kind\n";
  int code = kOk;
  for (const auto& pt : est.per_m) {
    csv << pt.m << ',' << format_double(pt.raw.value) << ',' << format_double(pt.per_m) << ','
        << bound_kind_name(pt.raw.kind) << '\n';
    if (pt.raw.kind == BoundKind::estimate) code = kCertification;
  }
  return {csv.str(), code};
}

std::string seq_field(const RatSeq& s) {
  std::string r = std::to_string(s.lo()) + ":";
  bool first = true;
  for (const auto& x : s.values()) {
    if (!first) r += ';';
    r += format_rational(x);
    first = false;
  }
  return r;
}

Output cmd_bridge(const RunConfig& cfg) {
  if (!cfg.inputs.empty()) throw CommandError(kPrecondition, "bridge: takes no input files");
  std::ostringstream csv;
  int code = kOk;
  if (cfg.demo == "correspondence") {
    csv << "id,p,q,rta_convertible,rta_predicate,ent_convertible,ent_predicate\n";
    for (const auto& row : correspondence_demo(cfg.pairs, cfg.seed)) {
      csv << row.id << ',' << seq_field(row.p) << ',' << seq_field(row.q) << ',' << row.rta_convertible << ','
          << row.rta_predicate << ',' << row.ent_convertible << ',' << row.ent_predicate << '\n';
      if (row.rta_convertible != row.rta_predicate || row.ent_convertible != row.ent_predicate) code = kCertification;
    }
  } else if (cfg.demo == "plateau") {
    csv << "m,s_max_rate,s_min_rate\n";
    for (const auto& pt : iid_smooth_entropy_rates({0.5, 0.5}, ms_or(cfg, {5, 10, 15, 20}), cfg.eps))
      csv << pt.m << ',' << format_double(pt.s_max_rate) << ',' << format_double(pt.s_min_rate) << '\n';
  } else {
    throw CommandError(kPrecondition, "bridge: --demo must be correspondence or plateau");
  }
  return {csv.str(), code};
}

Output cmd_certify_tp(const RunConfig& cfg) {
  if (!cfg.inputs.empty()) throw CommandError(kPrecondition, "certify-tp: takes no input files");
  const StateFamily fam = load_family(cfg, "iid:coin");
  if (fam.kind != FamilyKind::iid) throw CommandError(kPrecondition, "certify-tp: family must be i.i.d.");
  const F64Dist p = fam.generator(1).energy_distribution<double>();
  std::ostringstream csv;
  csv << "m,dtv,bound,ok\n";
  int code = kOk;
  for (const auto& row : iid_tp_certificate(p, ms_or(cfg, {16, 64, 256, 1024}))) {
    csv << row.m << ',' << format_double(row.dtv) << ',' << format_double(row.bound) << ',' << row.ok << '\n';
    if (!row.ok) code = kCertification;
  }
  return {csv.str(), code};
}

Output dispatch(const RunConfig& cfg) {
  if (cfg.command == "qfi") return cmd_qfi(cfg);
  if (cfg.command == "fmax") return cmd_fmax(cfg);
  if (cfg.command == "fmin") return cmd_fmin(cfg);
  if (cfg.command == "amaj") return cmd_amaj(cfg);
  if (cfg.command == "convert") return cmd_convert(cfg);
  if (cfg.command == "channel-verify") return cmd_channel_verify(cfg);
  if (cfg.command == "smooth") return cmd_smooth(cfg);
  if (cfg.command == "rates") return cmd_rates(cfg);
  if (cfg.command == "bridge") return cmd_bridge(cfg);
  if (cfg.command == "certify-tp") return cmd_certify_tp(cfg);
  throw CommandError(kPrecondition, "unknown command: " + cfg.command);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw CommandError(kPrecondition, "--tol must be > 0");
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0)) throw CommandError(kPrecondition, "--eps must lie in [0, 1)");
  if (cfg.window && *cfg.window < 0) throw CommandError(kPrecondition, "--window must be >= 0");
  if (cfg.trunc && *cfg.trunc < 1) throw CommandError(kPrecondition, "--trunc must be >= 1");
  if (cfg.pairs < 1) throw CommandError(kPrecondition, "--pairs must be >= 1");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const Output o = dispatch(cfg);
    if (cfg.out.empty()) {
      out << o.text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
      if (!f) throw CommandError(kPrecondition, "cannot write " + cfg.out);
      f << o.text;
    }
    if (o.code == kCertification) err << cfg.command << ": result not certified\n";
    return o.code;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.code;
  } catch (const JsonError& e) {
    err << e.what() << '\n';
    return e.line() > 0 ? kMalformed : kPrecondition;
  } catch (const Json::exception& e) {
    err << "schema error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const std::domain_error& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const std::out_of_range& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kCertification;
  }
}

int main_with_args(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"asymcalc: conversion calculus for coherence under time-translation symmetry"};
  RunConfig cfg;
  std::string backend = "rational";
  std::string ms;
  Index window = 0, trunc = 0;
  app.add_option("command", cfg.command, "qfi | fmax | fmin | amaj | convert | channel-verify | smooth | rates | bridge | certify-tp")
      ->required()
      ->check(CLI::IsMember({"qfi", "fmax", "fmin", "amaj", "convert", "channel-verify", "smooth", "rates", "bridge",
                             "certify-tp"}));
  app.add_option("inputs", cfg.inputs, "input JSON files");
  app.add_option("--backend", backend, "rational | f64")->check(CLI::IsMember({"rational", "f64"}));
  app.add_option("--tol", cfg.tol, "bisection tolerance");
  app.add_option("--eps", cfg.eps, "smoothing radius in [0, 1)");
  auto* window_opt = app.add_option("--window", window, "extra indices checked beyond the guaranteed window");
  auto* trunc_opt = app.add_option("--trunc", trunc, "truncation for Poisson-tagged states");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--ms", ms, "comma separated copy numbers");
  app.add_option("--dir", cfg.dir, "sup | inf")->check(CLI::IsMember({"sup", "inf"}));
  app.add_option("--family", cfg.family, "iid:coin | iid:poisson:<rate> | eigen | manifest.json");
  app.add_option("--demo", cfg.demo, "bridge demo: correspondence | plateau");
  app.add_option("--pairs", cfg.pairs, "bridge correspondence pairs");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kPrecondition;
  }
  cfg.backend = parse_backend(backend);
  if (window_opt->count() > 0) cfg.window = window;
  if (trunc_opt->count() > 0) cfg.trunc = trunc;
  if (!ms.empty()) {
    std::stringstream ss(ms);
    std::string item;
    while (std::getline(ss, item, ',')) {
      int m = 0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), m);
      if (res.ec != std::errc{} || res.ptr != item.data() + item.size() || m < 1) {
        err << "--ms: invalid entry '" << item << "'\n";
        return kPrecondition;
      }
      cfg.ms.push_back(m);
    }
  }
  return run(cfg, out, err);
}

}  // namespace asym::cli
