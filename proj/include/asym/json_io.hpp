// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "asym/channels.hpp"
#include "asym/density.hpp"
#include "asym/dists.hpp"
#include "asym/qfi.hpp"

namespace asym {

using Json = nlohmann::json;

// Malformed input: syntax errors carry a 1-based line and column.
class JsonError : public std::runtime_error {
 public:
  JsonError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
// Two-space indentation, sorted keys, trailing newline.
std::string dump_json(const Json& j);

// Non-finite doubles are written as the strings "inf", "-inf", "nan".
Json number_to_json(double x);
double number_from_json(const Json& j);

// {"offset": int, "values": [...]}; rational entries are "p/q" strings,
// float entries are numbers (rational strings are accepted on input).
Json to_json(const RatSeq& s);
Json to_json(const F64Seq& s);
RatSeq rat_seq_from_json(const Json& j);
F64Seq f64_seq_from_json(const Json& j);

// {"n_trunc": int, "amps": [[modulus, phase], ...]} with optional
// "profile" (exact rational sequence) and "poisson_rate" + "mixing"
// (Poisson factor tag).
Json to_json(const PureState& psi);
PureState state_from_json(const Json& j);

// {"period": float, "levels": [[energy, weight], ...]}
Json to_json(const GeneralSpectrum& g);
GeneralSpectrum spectrum_from_json(const Json& j);

// {"in_trunc": int, "kraus": [{"shift": int, "coeffs": [[re, im], ...]}]}
// with optional "out_trunc" (default: one past the largest target level).
Json to_json(const CovariantChannel& e);
CovariantChannel channel_from_json(const Json& j);

// {"rho": [[[re, im], ...], ...], "energies": [int, ...]}
Json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

Json to_json(const QfiBracket& b);
QfiBracket bracket_from_json(const Json& j);

template <class T>
Json to_json(const AMajorVerdict<T>& v);

// A document that describes an energy distribution: a state, a sequence or
// a spectrum.
F64Dist f64_distribution_from_json(const Json& j);
RatDist rat_distribution_from_json(const Json& j);

}  // namespace asym
