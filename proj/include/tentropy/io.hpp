#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tentropy/dynamics.hpp"
#include "tentropy/errors.hpp"
#include "tentropy/extended_real.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy::io {

using json = nlohmann::ordered_json;

/// Rejected input file. `field` names the offending key ("" for syntax errors).
class SpecError : public Error {
 public:
  SpecError(std::string field, const std::string& what)
      : Error(field.empty() ? what : "field '" + field + "': " + what), field(std::move(field)) {}
  std::string field;
};

/// On-disk description of a system:
///   {"n": 4, "alpha": [1,0,3,3], "weights": [1,1,1,2], "potential": [...], "measure": [...]}
/// Weights are raw (not logarithms) so exact zeros survive.
struct SystemSpec {
  std::size_t n = 0;
  std::vector<long long> alpha;
  std::vector<double> weights;
  std::optional<std::vector<double>> potential;
  std::optional<std::vector<double>> measure;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

inline constexpr double kSpecMeasureTol = 1e-9;

namespace detail {

template <class T>
std::vector<T> read_array(const json& doc, const char* field, std::size_t n) {
  const auto it = doc.find(field);
  if (it == doc.end()) throw SpecError(field, "missing");
  if (!it->is_array()) throw SpecError(field, "must be an array");
  if (it->size() != n) {
    throw SpecError(field, "has " + std::to_string(it->size()) + " entries, expected n = " + std::to_string(n));
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& v = (*it)[i];
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw SpecError(field, "entry " + std::to_string(i) + " is not an integer");
    } else {
      if (!v.is_number()) throw SpecError(field, "entry " + std::to_string(i) + " is not a number");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

}  // namespace detail

inline SystemSpec parse_system_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset; report line/column too
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SpecError("", "parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                            e.what());
  }
  if (!doc.is_object()) throw SpecError("", "top level must be an object");

  SystemSpec spec;
  const auto n_it = doc.find("n");
  if (n_it == doc.end()) throw SpecError("n", "missing");
  if (!n_it->is_number_integer() || n_it->get<long long>() < 1) throw SpecError("n", "must be a positive integer");
  spec.n = n_it->get<std::size_t>();
  spec.alpha = detail::read_array<long long>(doc, "alpha", spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const long long a = spec.alpha[i];
    if (a < 0 || a >= static_cast<long long>(spec.n)) {
      throw SpecError("alpha", "entry " + std::to_string(i) + " = " + std::to_string(a) + " is out of range [0, " +
                                   std::to_string(spec.n - 1) + "]");
    }
  }
  spec.weights = detail::read_array<double>(doc, "weights", spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (!(spec.weights[i] >= 0.0)) {
      throw SpecError("weights", "entry " + std::to_string(i) + " is negative");
    }
  }
  if (doc.contains("potential") && !doc["potential"].is_null()) {
    spec.potential = detail::read_array<double>(doc, "potential", spec.n);
  }
  if (doc.contains("measure") && !doc["measure"].is_null()) {
    spec.measure = detail::read_array<double>(doc, "measure", spec.n);
    double total = 0.0;
    for (std::size_t i = 0; i < spec.n; ++i) {
      if (!((*spec.measure)[i] >= 0.0)) throw SpecError("measure", "entry " + std::to_string(i) + " is negative");
      total += (*spec.measure)[i];
    }
    if (std::abs(total - 1.0) > kSpecMeasureTol) {
      throw SpecError("measure", "sums to " + std::to_string(total) + ", expected 1");
    }
  }
  return spec;
}

inline SystemSpec load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system_spec(ss.str());
}

inline json to_json(const SystemSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["alpha"] = spec.alpha;
  doc["weights"] = spec.weights;
  if (spec.potential) doc["potential"] = *spec.potential;
  if (spec.measure) doc["measure"] = *spec.measure;
  return doc;
}

inline std::string serialize(const SystemSpec& spec) { return to_json(spec).dump(); }

inline TransferOperator make_operator(const SystemSpec& spec) {
  return TransferOperator(FiniteSystem(std::span<const long long>(spec.alpha)), spec.weights);
}

inline Potential make_potential(const SystemSpec& spec) {
  return spec.potential ? Potential(*spec.potential) : Potential::zero(spec.n);
}

inline SystemSpec spec_from(const TransferOperator& t, const std::optional<Potential>& phi = std::nullopt) {
  SystemSpec s;
  s.n = t.size();
  for (Index a : t.system().alpha()) s.alpha.push_back(static_cast<long long>(a));
  s.weights = t.weights();
  if (phi) s.potential = phi->values();
  return s;
}

/// Numbers as JSON numbers, NEG_INF as the string "-inf".
inline json to_json(ExtendedReal v) {
  if (v.is_neg_inf()) return "-inf";
  return v.value();
}

// Same convention for plain doubles that may be infinite.
inline json number_or_inf(double v) {
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  return v;
}

inline json to_json(const Cycle& c) { return c.points; }

// 17 significant digits, "-inf" for NEG_INF; used by the CSV/markdown projections.
inline std::string format_number(double v) {
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// FNV-1a over the serialized spec; identifies a generated system in reports.
inline std::string system_hash(const SystemSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(spec)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tentropy::io
