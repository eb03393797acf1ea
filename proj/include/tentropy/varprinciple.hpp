#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tentropy/dynamics.hpp"
#include "tentropy/extended_real.hpp"
#include "tentropy/random.hpp"
#include "tentropy/t_entropy.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy {

struct VPOptions {
  double tol = 1e-8;
  std::size_t mixtures = 100;
  std::uint64_t seed = 0;
  // Evaluate tau by the full (n, D) search instead of the closed form.
  bool full_search = false;
  TauOptions search;
};

struct CycleScore {
  Cycle cycle;
  ExtendedReal value;  // mu_C(phi) + tau(mu_C)
};

struct VPReport {
  ExtendedReal lambda;
  ExtendedReal best_value;
  Measure best_measure;
  double gap = 0.0;
  std::vector<CycleScore> per_cycle;
  // max over sampled mixtures of (mu(phi) + tau(mu)) - lambda; -inf when none were finite
  double max_mixture_excess = -std::numeric_limits<double>::infinity();
  bool passed = false;
};

namespace detail {

// a - b with NEG_INF - NEG_INF read as 0
inline double signed_gap(ExtendedReal a, ExtendedReal b) {
  if (a.is_neg_inf() && b.is_neg_inf()) return 0.0;
  if (a.is_neg_inf()) return -std::numeric_limits<double>::infinity();
  if (b.is_neg_inf()) return std::numeric_limits<double>::infinity();
  return a.value() - b.value();
}

inline ExtendedReal tau_for_vp(const TransferOperator& t, const Measure& mu, const VPOptions& opts) {
  if (opts.full_search) return tau(t, mu, opts.search).tau;
  return tau_invariant_closed_form(t, mu);
}

}  // namespace detail

/// Checks lambda(phi) = max over invariant mu of mu(phi) + tau(mu), where tau
/// belongs to the untilted operator. The maximum is taken over the ergodic
/// (cycle) measures; `mixtures` random invariant measures test the
/// one-sided bound on the rest of the polytope.
inline VPReport check_variational_principle(const TransferOperator& t, const Potential& phi, const VPOptions& opts = {}) {
  const auto& sys = t.system();
  const auto cycles = cycle_decomposition(sys);
  VPReport rep;
  rep.lambda = log_spectral_radius_cycles(tilt(t, phi), Potential::zero(t.size()), cycles).log_radius;

  bool have = false;
  for (const Cycle& c : cycles) {
    const Measure mu = cycle_measure(sys, c);
    const ExtendedReal value = ExtendedReal(mu.integrate(phi.values())) + detail::tau_for_vp(t, mu, opts);
    rep.per_cycle.push_back({c, value});
    if (!have || value > rep.best_value) {
      have = true;
      rep.best_value = value;
      rep.best_measure = mu;
    }
  }
  rep.gap = detail::signed_gap(rep.lambda, rep.best_value);

  std::mt19937_64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.mixtures; ++i) {
    const Measure mu = random_invariant_measure(sys, cycles, rng);
    const ExtendedReal value = ExtendedReal(mu.integrate(phi.values())) + detail::tau_for_vp(t, mu, opts);
    rep.max_mixture_excess = std::max(rep.max_mixture_excess, detail::signed_gap(value, rep.lambda));
  }
  rep.passed = std::abs(rep.gap) <= opts.tol && rep.max_mixture_excess <= opts.tol;
  return rep;
}

struct EquivOptions {
  TauOptions search;
  double tol = 1e-6;
  // tau'_n(mu, D) <= tau_n(mu, D) + pointwise_slack on every pair
  double pointwise_slack = 1e-9;
};

struct Witness {
  std::size_t n = 0;
  std::string partition;
};

struct EquivReport {
  ExtendedReal old_value = NEG_INF;
  ExtendedReal new_value = NEG_INF;
  Witness witness_old;
  Witness witness_new;
  // max over evaluated pairs of tau'_n - tau_n (should be <= 0)
  double max_pointwise_excess = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::size_t unconverged_solves = 0;
  bool passed = false;
};

/// Evaluates both definitions on the same (n, D) grid and compares the infima.
/// Only invariant measures qualify.
inline EquivReport check_definition_equivalence(const TransferOperator& t, const Measure& mu,
                                                const EquivOptions& opts = {}) {
  if (!is_invariant(t.system(), mu, opts.search.invariant_tol)) {
    throw NotInvariant("definition equivalence is only claimed for invariant measures");
  }
  EquivReport rep;
  bool have = false;
  for_each_candidate(t, opts.search, [&](const Candidate& cand) {
    const ExtendedReal fresh = tau_prime_n(t, mu, *cand.partition, cand.n);
    const auto sup = tau_n_sup(t, mu, *cand.partition, cand.n, opts.search.solver);
    if (!sup.converged && !sup.value.is_neg_inf()) ++rep.unconverged_solves;
    ++rep.evaluations;
    rep.max_pointwise_excess = std::max(rep.max_pointwise_excess, detail::signed_gap(fresh, sup.value));
    const double n = static_cast<double>(cand.n);
    const ExtendedReal old_norm = sup.value / n;
    const ExtendedReal new_norm = fresh / n;
    if (!have || old_norm < rep.old_value) {
      rep.old_value = old_norm;
      rep.witness_old = {cand.n, cand.label};
    }
    if (!have || new_norm < rep.new_value) {
      rep.new_value = new_norm;
      rep.witness_new = {cand.n, cand.label};
    }
    have = true;
  });
  rep.passed = distance(rep.old_value, rep.new_value) <= opts.tol &&
               rep.max_pointwise_excess <= opts.pointwise_slack;
  return rep;
}

struct LegendreOptions {
  std::size_t iters = 10000;
  double tol = 1e-3;
  double invariant_tol = 1e-10;
};

struct LegendreResult {
  ExtendedReal value;    // exact mixture path, authoritative
  ExtendedReal numeric;  // subgradient estimate of inf_phi lambda(phi) - mu(phi)
  std::size_t iterations = 0;
  bool converged = false;  // paths agree within tol
};

/// tau(mu) recovered as inf over phi of lambda(phi) - mu(phi).
///
/// Exact path: mu = sum_C p_C mu_C, so the infimum is sum_C p_C * avg_C ln w.
/// Numeric path: subgradient descent on the convex piecewise-linear objective
/// with step 1/sqrt(k); the subgradient at phi is (witness cycle measure - mu).
/// When mu charges a cycle carrying a zero weight the objective is unbounded
/// below and both paths report NEG_INF without iterating.
inline LegendreResult legendre_dual_tau(const TransferOperator& t, const Measure& mu, const LegendreOptions& opts = {}) {
  const auto& sys = t.system();
  if (!is_invariant(sys, mu, opts.invariant_tol)) throw NotInvariant("Legendre inversion needs an invariant measure");
  const auto cycles = cycle_decomposition(sys);
  const auto mixture = cycle_mixture(sys, cycles, mu);

  LegendreResult res;
  ExtendedReal exact(0.0);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (mixture.coefficients[i] == 0.0) continue;
    exact += mixture.coefficients[i] * tau_cycle_closed_form(t, cycles[i]);
  }
  res.value = exact;
  if (exact.is_neg_inf()) {
    res.numeric = NEG_INF;
    res.converged = true;
    return res;
  }

  const std::size_t n = t.size();
  std::vector<Measure> cycle_measures;
  for (const auto& c : cycles) cycle_measures.push_back(cycle_measure(sys, c));

  auto objective = [&](const std::vector<double>& phi, std::size_t* witness) {
    const Potential pot(phi);
    std::size_t best = 0;
    ExtendedReal lam = NEG_INF;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      const ExtendedReal m = cycle_mean(t, pot, cycles[i]);
      if (i == 0 || m > lam) {
        lam = m;
        best = i;
      }
    }
    if (witness) *witness = best;
    return lam.value() - mu.integrate(phi);  // finite: mu charges a finite cycle
  };

  std::vector<double> phi(n, 0.0);
  std::vector<double> avg(n, 0.0);
  double avg_weight = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= opts.iters; ++k) {
    std::size_t witness = 0;
    best = std::min(best, objective(phi, &witness));
    const double step = 1.0 / std::sqrt(static_cast<double>(k));
    for (Index x = 0; x < n; ++x) phi[x] -= step * (cycle_measures[witness][x] - mu[x]);
    for (Index x = 0; x < n; ++x) avg[x] += step * phi[x];
    avg_weight += step;
  }
  for (double& a : avg) a /= avg_weight;
  best = std::min(best, objective(phi, nullptr));
  best = std::min(best, objective(avg, nullptr));
  res.numeric = ExtendedReal(best);
  res.iterations = opts.iters;
  res.converged = distance(res.numeric, res.value) <= opts.tol;
  return res;
}

}  // namespace tentropy
