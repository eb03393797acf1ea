#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tentropy/io.hpp"
#include "tentropy/sweep.hpp"
#include "tentropy/t_entropy.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy::cli {

using io::json;

// Exit codes shared by every command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCheckFailed = 2;

/// Default master seed: TENTROPY_SEED when set, otherwise 0.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("TENTROPY_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

struct CommonArgs {
  std::string command_line;
  // Wall-clock time is left out unless asked for, so identical runs give identical bytes.
  bool timing = false;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline json make_report(const CommonArgs& common, json inputs, json config, json results, const Stopwatch& sw) {
  json doc;
  inputs["command"] = common.command_line;
  doc["inputs"] = std::move(inputs);
  doc["config"] = std::move(config);
  doc["results"] = std::move(results);
  doc["timing"] = common.timing ? json{{"wall_seconds", sw.seconds()}} : json(nullptr);
  return doc;
}

inline void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace detail

struct ValidateArgs {
  std::string system_file;
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  double tol = 1e-12;
  double iterated_tol = 1e-10;
};

/// Positivity and homological-identity residuals on random test functions.
inline int cmd_validate(const ValidateArgs& args, const CommonArgs& common, std::ostream& out, std::ostream& err) {
  detail::Stopwatch sw;
  io::SystemSpec spec;
  TransferOperator op;
  try {
    spec = io::load_system_spec(args.system_file);
    op = io::make_operator(spec);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const auto& sys = op.system();
  const std::size_t n = op.size();
  std::mt19937_64 rng(args.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> signed_unit(-1.0, 1.0);
  auto draw = [&](auto& dist) {
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
  };

  double min_image = 0.0;
  double residual = 0.0;
  double iterated_residual = 0.0;
  for (std::size_t s = 0; s < args.samples; ++s) {
    const auto g = draw(unit);
    for (double v : op.apply(g)) min_image = std::min(min_image, v);

    const auto f = draw(signed_unit);
    const auto h = draw(signed_unit);
    const auto fa = sys.compose(f);
    std::vector<double> lhs_in(n);
    for (Index y = 0; y < n; ++y) lhs_in[y] = fa[y] * h[y];
    const auto lhs = op.apply(lhs_in);
    const auto ah = op.apply(h);
    for (Index x = 0; x < n; ++x) residual = std::max(residual, std::abs(lhs[x] - f[x] * ah[x]));

    for (std::size_t k = 1; k <= 4; ++k) {
      const auto fk = sys.compose(f, k);
      for (Index y = 0; y < n; ++y) lhs_in[y] = h[y] * fk[y];
      const auto l = power_apply(op, k, lhs_in);
      const auto r = power_apply(op, k, h);
      for (Index x = 0; x < n; ++x) iterated_residual = std::max(iterated_residual, std::abs(l[x] - f[x] * r[x]));
    }
  }
  const bool positive = min_image >= 0.0;
  const bool pass = positive && residual <= args.tol && iterated_residual <= args.iterated_tol;

  json results;
  results["n"] = n;
  results["cycles"] = json::array();
  for (const auto& c : cycle_decomposition(sys)) results["cycles"].push_back(io::to_json(c));
  results["positivity"] = {{"min_image", min_image}, {"pass", positive}};
  results["homological_residual"] = residual;
  results["iterated_residual"] = iterated_residual;
  results["pass"] = pass;
  detail::emit(out, detail::make_report(common, {{"system", io::to_json(spec)}},
                                        {{"seed", args.seed},
                                         {"samples", args.samples},
                                         {"tol", args.tol},
                                         {"iterated_tol", args.iterated_tol}},
                                        std::move(results), sw));
  return pass ? kExitPass : kExitInputError;
}

struct SpectralArgs {
  std::string system_file;
  std::string method = "both";
  double tol = kDefaultSpectralTol;
  std::size_t squarings = kDefaultSquarings;
};

inline int cmd_spectral(const SpectralArgs& args, const CommonArgs& common, std::ostream& out, std::ostream& err) {
  detail::Stopwatch sw;
  io::SystemSpec spec;
  TransferOperator op;
  Potential phi;
  try {
    spec = io::load_system_spec(args.system_file);
    op = io::make_operator(spec);
    phi = io::make_potential(spec);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (args.method != "cycles" && args.method != "power" && args.method != "both") {
    err << "error: unknown method '" << args.method << "'\n";
    return kExitInputError;
  }

  json results;
  std::optional<SpectralResult> by_cycles, by_power;
  if (args.method != "power") {
    by_cycles = log_spectral_radius_cycles(op, phi);
    results["cycles"] = {{"lambda", io::to_json(by_cycles->log_radius)},
                         {"witness_cycle", by_cycles->witness_cycle ? io::to_json(*by_cycles->witness_cycle)
                                                                    : json(nullptr)}};
  }
  if (args.method != "cycles") {
    by_power = log_spectral_radius_power(op, phi, args.squarings);
    results["power"] = {{"lambda", io::to_json(by_power->log_radius)}, {"squarings", by_power->iterations}};
  }
  bool agree = true;
  if (by_cycles && by_power) {
    const double d = distance(by_cycles->log_radius, by_power->log_radius);
    agree = d <= args.tol;
    results["disagreement"] = io::number_or_inf(d);
  }
  results["pass"] = agree;
  detail::emit(out, detail::make_report(common, {{"system", io::to_json(spec)}},
                                        {{"method", args.method}, {"tol", args.tol}, {"squarings", args.squarings}},
                                        std::move(results), sw));
  return agree ? kExitPass : kExitCheckFailed;
}

struct TauArgs {
  std::string system_file;
  std::optional<std::string> measure_file;
  std::optional<std::size_t> cycle;
  std::optional<std::string> mixture;
  std::size_t n_max = 6;
  std::size_t partitions = 32;
  std::uint64_t seed = 0;
  double invariant_tol = 1e-10;
};

namespace detail {

inline std::vector<double> read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::SpecError("measure", "cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::SpecError("measure", std::string("parse error: ") + e.what());
  }
  if (doc.is_object() && doc.contains("measure")) doc = doc["measure"];
  if (!doc.is_array()) throw io::SpecError("measure", "expected an array of weights");
  std::vector<double> w;
  for (const auto& v : doc) {
    if (!v.is_number()) throw io::SpecError("measure", "entries must be numbers");
    w.push_back(v.get<double>());
  }
  return w;
}

// "i:p,j:q" over cycle indices
inline std::vector<std::pair<std::size_t, double>> parse_mixture(const std::string& text) {
  std::vector<std::pair<std::size_t, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw io::SpecError("mixture", "expected cycle:weight, got '" + item + "'");
    try {
      out.emplace_back(std::stoull(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw io::SpecError("mixture", "cannot read '" + item + "'");
    }
  }
  if (out.empty()) throw io::SpecError("mixture", "empty mixture");
  return out;
}

}  // namespace detail

inline int cmd_tau(const TauArgs& args, const CommonArgs& common, std::ostream& out, std::ostream& err) {
  detail::Stopwatch sw;
  io::SystemSpec spec;
  TransferOperator op;
  Measure mu;
  json source;
  try {
    spec = io::load_system_spec(args.system_file);
    op = io::make_operator(spec);
    const auto cycles = cycle_decomposition(op.system());
    const int chosen = int(args.measure_file.has_value()) + int(args.cycle.has_value()) + int(args.mixture.has_value());
    if (chosen > 1) throw io::SpecError("measure", "give at most one of --measure, --cycle, --mixture");
    if (args.cycle) {
      if (*args.cycle >= cycles.size()) {
        throw io::SpecError("cycle", "index " + std::to_string(*args.cycle) + " but the system has " +
                                         std::to_string(cycles.size()) + " cycles");
      }
      mu = cycle_measure(op.system(), cycles[*args.cycle]);
      source = {{"cycle", *args.cycle}, {"points", io::to_json(cycles[*args.cycle])}};
    } else if (args.mixture) {
      std::vector<Measure> parts;
      std::vector<double> coeffs;
      for (const auto& [idx, p] : detail::parse_mixture(*args.mixture)) {
        if (idx >= cycles.size()) throw io::SpecError("mixture", "no cycle " + std::to_string(idx));
        parts.push_back(cycle_measure(op.system(), cycles[idx]));
        coeffs.push_back(p);
      }
      mu = mix(parts, coeffs);
      source = {{"mixture", *args.mixture}};
    } else {
      std::vector<double> w;
      if (args.measure_file) {
        w = detail::read_measure_file(*args.measure_file);
        source = {{"measure_file", *args.measure_file}};
      } else if (spec.measure) {
        w = *spec.measure;
        source = {{"spec", "measure"}};
      } else {
        throw io::SpecError("measure", "no measure given (use --measure, --cycle, --mixture or the spec field)");
      }
      if (w.size() != op.size()) {
        throw io::SpecError("measure", "has " + std::to_string(w.size()) + " entries, expected n = " +
                                           std::to_string(op.size()));
      }
      mu = Measure(std::move(w), io::kSpecMeasureTol);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  TauOptions opts;
  opts.n_max = args.n_max;
  opts.random_partitions = args.partitions;
  opts.seed = args.seed;
  opts.invariant_tol = args.invariant_tol;
  const auto res = tau(op, mu, opts);

  json results;
  results["tau"] = io::to_json(res.tau);
  results["definition"] = to_string(res.definition);
  results["invariant"] = res.definition == Definition::new_formula;
  results["witness"] = {{"n", res.best_n}, {"partition", res.best_label}, {"elements", res.best_partition.size()}};
  results["best_m"] = res.best_m ? json(res.best_m->weights()) : json(nullptr);
  results["evaluations"] = res.evaluations;
  results["unconverged_solves"] = res.unconverged_solves;
  json inputs{{"system", io::to_json(spec)}, {"measure_source", source}, {"measure", mu.weights()}};
  detail::emit(out, detail::make_report(common, std::move(inputs),
                                        {{"n_max", args.n_max},
                                         {"partitions", args.partitions},
                                         {"seed", args.seed},
                                         {"invariant_tol", args.invariant_tol}},
                                        std::move(results), sw));
  return kExitPass;
}

struct VerifyArgs {
  std::string suite = "all";
  std::optional<std::size_t> count;
  std::optional<std::size_t> n_points;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string format = "json";
};

inline int cmd_verify(const VerifyArgs& args, const CommonArgs& common, std::ostream& out, std::ostream& err) {
  detail::Stopwatch sw;
  std::vector<sweep::Suite> suites;
  if (args.suite == "vp" || args.suite == "all") suites.push_back(sweep::Suite::vp);
  if (args.suite == "equiv" || args.suite == "all") suites.push_back(sweep::Suite::equiv);
  if (args.suite == "legendre" || args.suite == "all") suites.push_back(sweep::Suite::legendre);
  if (suites.empty()) {
    err << "error: unknown suite '" << args.suite << "'\n";
    return kExitInputError;
  }
  if (args.format != "json" && args.format != "csv" && args.format != "md") {
    err << "error: unknown format '" << args.format << "'\n";
    return kExitInputError;
  }

  std::vector<sweep::TrialRow> rows;
  json config = json::object();
  bool all_pass = true;
  for (auto s : suites) {
    auto cfg = sweep::default_config(s);
    if (args.count) cfg.count = *args.count;
    if (args.n_points) cfg.max_points = *args.n_points;
    if (args.tol) cfg.tol = *args.tol;
    config[sweep::name(s)] = {{"count", cfg.count}, {"n_points", cfg.max_points}, {"tol", cfg.tol}};
    for (auto& r : sweep::run_suite(s, cfg, args.seed)) {
      all_pass = all_pass && r.pass;
      rows.push_back(std::move(r));
    }
  }

  const bool prefix = suites.size() > 1;
  if (args.format == "csv") {
    out << sweep::kCsvHeader << '\n';
    for (const auto& r : rows) out << sweep::csv_line(r, prefix) << '\n';
  } else if (args.format == "md") {
    out << "| trial | n | lambda | best | gap | pass |\n|---|---|---|---|---|---|\n";
    for (const auto& r : rows) out << sweep::markdown_line(r) << '\n';
    out << "\n" << (all_pass ? "all trials passed" : "SOME TRIALS FAILED") << '\n';
  } else {
    json results;
    results["rows"] = json::array();
    double max_abs_gap = 0.0;
    std::size_t failed = 0;
    for (const auto& r : rows) {
      results["rows"].push_back(sweep::to_json(r));
      max_abs_gap = std::max(max_abs_gap, std::abs(r.gap));
      failed += r.pass ? 0 : 1;
    }
    results["summary"] = {{"trials", rows.size()},
                          {"failed", failed},
                          {"max_abs_gap", io::number_or_inf(max_abs_gap)},
                          {"pass", all_pass}};
    detail::emit(out, detail::make_report(common, {{"suite", args.suite}, {"seed", args.seed}}, std::move(config),
                                          std::move(results), sw));
  }
  return all_pass ? kExitPass : kExitCheckFailed;
}

}  // namespace tentropy::cli
