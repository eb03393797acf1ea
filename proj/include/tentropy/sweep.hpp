#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tentropy/io.hpp"
#include "tentropy/random.hpp"
#include "tentropy/t_entropy.hpp"
#include "tentropy/varprinciple.hpp"

namespace tentropy::sweep {

enum class Suite { vp, equiv, legendre };

inline const char* name(Suite s) {
  switch (s) {
    case Suite::vp:
      return "vp";
    case Suite::equiv:
      return "equiv";
    default:
      return "legendre";
  }
}

/// One random system of a sweep. Columns follow the csv header
/// trial,n,lambda,best,gap,pass:
///   vp        lambda = lambda(phi), best = max over cycle measures, gap = lambda - best
///   equiv     lambda = old-definition tau, best = new-definition tau, gap = old - new
///             (worst measure of the trial)
///   legendre  lambda = inf_phi (lambda(phi) - mu(phi)) by subgradient, best = tau(mu)
///             by search, gap = lambda - best (worst measure of the trial)
struct TrialRow {
  Suite suite = Suite::vp;
  std::size_t trial = 0;
  std::size_t n = 0;
  std::string system_hash;
  ExtendedReal lambda;
  ExtendedReal best;
  double gap = 0.0;
  bool pass = false;
  // suite-specific secondary figure (mixture excess, pointwise excess, exact/numeric gap)
  double aux = 0.0;
  std::size_t measures = 0;
};

struct SuiteConfig {
  std::size_t count = 0;
  std::size_t max_points = 0;
  double tol = 0.0;
};

inline SuiteConfig default_config(Suite s) {
  switch (s) {
    case Suite::vp:
      return {100, 20, 1e-8};
    case Suite::equiv:
      return {50, 8, 1e-6};
    default:
      return {20, 8, 1e-3};
  }
}

namespace detail {

inline double gap_of(ExtendedReal a, ExtendedReal b) { return tentropy::detail::signed_gap(a, b); }

inline RandomSystem trial_system(std::size_t max_points, std::uint64_t seed, std::size_t trial) {
  RandomSystemParams p;
  p.max_points = max_points;
  return random_system(p, derive_seed(seed, trial));
}

// cycle measures of the system followed by `mixtures` random invariant mixtures
inline std::vector<Measure> trial_measures(const FiniteSystem& sys, std::size_t mixtures, std::uint64_t seed) {
  const auto cycles = cycle_decomposition(sys);
  std::vector<Measure> out;
  for (const auto& c : cycles) out.push_back(cycle_measure(sys, c));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < mixtures; ++i) out.push_back(random_invariant_measure(sys, cycles, rng));
  return out;
}

}  // namespace detail

inline TrialRow run_vp_trial(std::size_t trial, const SuiteConfig& cfg, std::uint64_t seed) {
  const auto rs = detail::trial_system(cfg.max_points, seed, trial);
  VPOptions opts;
  opts.tol = cfg.tol;
  opts.mixtures = 100;
  opts.seed = derive_seed(seed ^ 0x5650ULL, trial);
  const auto rep = check_variational_principle(rs.op, rs.phi, opts);
  TrialRow row;
  row.suite = Suite::vp;
  row.trial = trial;
  row.n = rs.op.size();
  row.system_hash = io::system_hash(io::spec_from(rs.op, rs.phi));
  row.lambda = rep.lambda;
  row.best = rep.best_value;
  row.gap = rep.gap;
  row.pass = rep.passed;
  row.aux = rep.max_mixture_excess;
  row.measures = rep.per_cycle.size() + opts.mixtures;
  return row;
}

inline TrialRow run_equiv_trial(std::size_t trial, const SuiteConfig& cfg, std::uint64_t seed) {
  const auto rs = detail::trial_system(cfg.max_points, seed, trial);
  EquivOptions opts;
  opts.tol = cfg.tol;
  opts.search.n_max = 4;
  opts.search.seed = derive_seed(seed ^ 0x4551ULL, trial);
  const auto measures = detail::trial_measures(rs.op.system(), 3, derive_seed(seed ^ 0x4d49ULL, trial));

  TrialRow row;
  row.suite = Suite::equiv;
  row.trial = trial;
  row.n = rs.op.size();
  row.system_hash = io::system_hash(io::spec_from(rs.op));
  row.pass = true;
  row.measures = measures.size();
  row.aux = -std::numeric_limits<double>::infinity();
  double worst = -1.0;
  for (const auto& mu : measures) {
    const auto rep = check_definition_equivalence(rs.op, mu, opts);
    row.pass = row.pass && rep.passed;
    row.aux = std::max(row.aux, rep.max_pointwise_excess);
    const double d = distance(rep.old_value, rep.new_value);
    if (d > worst) {
      worst = d;
      row.lambda = rep.old_value;
      row.best = rep.new_value;
      row.gap = detail::gap_of(rep.old_value, rep.new_value);
    }
  }
  return row;
}

inline TrialRow run_legendre_trial(std::size_t trial, const SuiteConfig& cfg, std::uint64_t seed) {
  const auto rs = detail::trial_system(cfg.max_points, seed, trial);
  const auto measures = detail::trial_measures(rs.op.system(), 1, derive_seed(seed ^ 0x4c47ULL, trial));
  LegendreOptions lopts;
  lopts.tol = cfg.tol;
  TauOptions topts;
  topts.seed = derive_seed(seed ^ 0x5441ULL, trial);

  TrialRow row;
  row.suite = Suite::legendre;
  row.trial = trial;
  row.n = rs.op.size();
  row.system_hash = io::system_hash(io::spec_from(rs.op));
  row.pass = true;
  row.measures = measures.size();
  double worst = -1.0;
  for (const auto& mu : measures) {
    const auto dual = legendre_dual_tau(rs.op, mu, lopts);
    const auto searched = tau(rs.op, mu, topts);
    const double d = distance(dual.numeric, searched.tau);
    const double paths = distance(dual.numeric, dual.value);
    row.pass = row.pass && d <= cfg.tol && paths <= cfg.tol;
    row.aux = std::max(row.aux, paths);
    if (d > worst) {
      worst = d;
      row.lambda = dual.numeric;
      row.best = searched.tau;
      row.gap = detail::gap_of(dual.numeric, searched.tau);
    }
  }
  return row;
}

inline std::vector<TrialRow> run_suite(Suite s, const SuiteConfig& cfg, std::uint64_t seed) {
  std::vector<TrialRow> rows;
  rows.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    switch (s) {
      case Suite::vp:
        rows.push_back(run_vp_trial(i, cfg, seed));
        break;
      case Suite::equiv:
        rows.push_back(run_equiv_trial(i, cfg, seed));
        break;
      case Suite::legendre:
        rows.push_back(run_legendre_trial(i, cfg, seed));
        break;
    }
  }
  return rows;
}

inline io::json to_json(const TrialRow& r) {
  io::json j;
  j["suite"] = name(r.suite);
  j["trial"] = r.trial;
  j["n"] = r.n;
  j["system_hash"] = r.system_hash;
  j["lambda"] = io::to_json(r.lambda);
  j["best"] = io::to_json(r.best);
  j["gap"] = io::number_or_inf(r.gap);
  j["aux"] = io::number_or_inf(r.aux);
  j["measures"] = r.measures;
  j["pass"] = r.pass;
  return j;
}

inline constexpr const char* kCsvHeader = "trial,n,lambda,best,gap,pass";

// `prefix_suite` tags trial ids with the suite name when several suites share a table.
inline std::string csv_line(const TrialRow& r, bool prefix_suite) {
  std::string trial = prefix_suite ? std::string(name(r.suite)) + ":" + std::to_string(r.trial)
                                   : std::to_string(r.trial);
  return trial + "," + std::to_string(r.n) + "," + r.lambda.to_string() + "," + r.best.to_string() + "," +
         io::format_number(r.gap) + "," + (r.pass ? "true" : "false");
}

inline std::string markdown_line(const TrialRow& r) {
  return "| " + std::string(name(r.suite)) + ":" + std::to_string(r.trial) + " | " + std::to_string(r.n) + " | " +
         r.lambda.to_string() + " | " + r.best.to_string() + " | " + io::format_number(r.gap) + " | " +
         (r.pass ? "pass" : "FAIL") + " |";
}

}  // namespace tentropy::sweep
