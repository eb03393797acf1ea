#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tentropy/dynamics.hpp"
#include "tentropy/errors.hpp"
#include "tentropy/extended_real.hpp"
#include "tentropy/partition.hpp"
#include "tentropy/random.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy {

/// tau'_n(mu, D) = sum over g in D of mu(g) ln(mu(A^n g) / mu(g)).
/// Members with mu(g) = 0 contribute 0; mu(g) > 0 with mu(A^n g) = 0 gives NEG_INF.
inline ExtendedReal tau_prime_n(const TransferOperator& t, const Measure& mu, const PartitionOfUnity& d,
                                std::size_t n) {
  ExtendedReal total(0.0);
  for (const auto& g : d) {
    const double mass = mu.integrate(g);
    if (mass == 0.0) continue;
    total += weighted_log_ratio(mass, mu.integrate(power_apply(t, n, g)), mass);
    if (total.is_neg_inf()) return NEG_INF;
  }
  return total;
}

struct SolverOptions {
  double tol = 1e-12;             // stop once the objective improves by less than this...
  double gap_tol = 1e-10;         // ...and the certified optimality gap is below this
  std::size_t max_iter = 100000;
  bool record_history = false;
};

struct SimplexSolveReport {
  Measure argmax;
  ExtendedReal value;
  std::size_t iterations = 0;
  double final_improvement = 0.0;
  // Upper bound on (sup F) - value, from ln max_x dF/dm(x).
  double gap_bound = 0.0;
  // Most negative single-step change of the objective (0 when monotone).
  double worst_step = 0.0;
  bool converged = true;
  std::vector<double> history;
};

/// Maximizes F(m) = sum_g c_g ln(m . v_g) over probability vectors m by the
/// multiplicative update m'(x) = m(x) sum_g c_g v_g(x) / (m . v_g), started
/// from the uniform point. The update keeps m on the simplex and never
/// decreases F. Coordinates that reach 0 stay at 0, hence the interior start.
inline SimplexSolveReport simplex_log_maximize(std::span<const double> c, const std::vector<std::vector<double>>& v,
                                               const SolverOptions& opts = {}) {
  if (c.size() != v.size() || v.empty()) throw SizeMismatch("need one vector per coefficient");
  const std::size_t n = v.front().size();
  double csum = 0.0;
  for (double ci : c) {
    if (!(ci >= 0.0)) throw BadCoefficients("coefficients must be nonnegative");
    csum += ci;
  }
  if (std::abs(csum - 1.0) > 1e-12) throw BadCoefficients("coefficients sum to " + std::to_string(csum));

  std::vector<double> coef;
  std::vector<const std::vector<double>*> vecs;
  for (std::size_t g = 0; g < c.size(); ++g) {
    if (v[g].size() != n) throw SizeMismatch("vectors have different lengths");
    for (double e : v[g]) {
      if (!(e >= 0.0)) throw Error("vectors must be entrywise nonnegative");
    }
    if (c[g] == 0.0) continue;
    coef.push_back(c[g]);
    vecs.push_back(&v[g]);
  }

  SimplexSolveReport rep;
  std::vector<double> m(n, 1.0 / static_cast<double>(n));
  for (const auto* vg : vecs) {
    if (std::all_of(vg->begin(), vg->end(), [](double e) { return e == 0.0; })) {
      rep.argmax = Measure(m);
      rep.value = NEG_INF;
      return rep;
    }
  }

  std::vector<double> dots(coef.size());
  auto evaluate = [&](const std::vector<double>& point) {
    double f = 0.0;
    for (std::size_t g = 0; g < coef.size(); ++g) {
      double d = 0.0;
      for (std::size_t x = 0; x < n; ++x) d += point[x] * (*vecs[g])[x];
      dots[g] = d;
      f += coef[g] * std::log(d);
    }
    return f;
  };

  double f = evaluate(m);
  if (opts.record_history) rep.history.push_back(f);
  std::vector<double> ratio(n);
  rep.converged = false;
  while (rep.iterations < opts.max_iter) {
    std::fill(ratio.begin(), ratio.end(), 0.0);
    for (std::size_t g = 0; g < coef.size(); ++g) {
      const double scale = coef[g] / dots[g];
      for (std::size_t x = 0; x < n; ++x) ratio[x] += scale * (*vecs[g])[x];
    }
    rep.gap_bound = std::log(*std::max_element(ratio.begin(), ratio.end()));

    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      m[x] *= ratio[x];
      total += m[x];
    }
    for (double& mx : m) mx /= total;

    const double next = evaluate(m);
    ++rep.iterations;
    rep.final_improvement = next - f;
    rep.worst_step = std::min(rep.worst_step, rep.final_improvement);
    f = next;
    if (opts.record_history) rep.history.push_back(f);
    if (rep.final_improvement < opts.tol && rep.gap_bound <= opts.gap_tol) {
      rep.converged = true;
      break;
    }
  }
  rep.argmax = Measure(std::move(m), 1e-10);
  rep.value = ExtendedReal(f);
  return rep;
}

/// tau_n(mu, D) = sup over m of sum_g mu(g) ln(m(A^n g) / mu(g)).
/// Returned value is that objective; argmax is the maximizing m.
inline SimplexSolveReport tau_n_sup(const TransferOperator& t, const Measure& mu, const PartitionOfUnity& d,
                                    std::size_t n, const SolverOptions& opts = {}) {
  std::vector<double> masses;
  std::vector<std::vector<double>> images;
  for (const auto& g : d) {
    const double mass = mu.integrate(g);
    if (mass == 0.0) continue;
    masses.push_back(mass);
    images.push_back(power_apply(t, n, g));
  }
  // sum of retained masses is mu(1) = 1 up to roundoff; rescale so the solver
  // sees an exact simplex weight vector and undo it afterwards
  double total = 0.0;
  for (double a : masses) total += a;
  std::vector<double> c(masses.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = masses[i] / total;

  SimplexSolveReport rep = simplex_log_maximize(c, images, opts);
  if (rep.value.is_neg_inf()) return rep;
  double entropy_term = 0.0;
  for (double a : masses) entropy_term += a * std::log(a);
  rep.value = ExtendedReal(total * rep.value.value() - entropy_term);
  if (!rep.history.empty()) {
    for (double& h : rep.history) h = total * h - entropy_term;
  }
  return rep;
}

/// Direct evaluation of sum_g mu(g) ln(m(A^n g) / mu(g)) at a given m.
inline ExtendedReal tau_n_objective(const TransferOperator& t, const Measure& mu, const PartitionOfUnity& d,
                                    std::size_t n, const Measure& m) {
  ExtendedReal total(0.0);
  for (const auto& g : d) {
    const double mass = mu.integrate(g);
    if (mass == 0.0) continue;
    total += weighted_log_ratio(mass, m.integrate(power_apply(t, n, g)), mass);
  }
  return total;
}

/// (1/|C|) sum over C of ln w; NEG_INF if a weight on the cycle vanishes.
inline ExtendedReal tau_cycle_closed_form(const TransferOperator& t, const Cycle& c) {
  check_cycle(t.system(), c);
  return cycle_mean(t, Potential::zero(t.size()), c);
}

/// t-entropy of an invariant measure in closed form: mu(ln w), with 0 ln 0 = 0
/// and NEG_INF when mu charges a point of zero weight. This is tau'_1 at the
/// singleton partition, the minimizing (n, D) pair on finite systems.
inline ExtendedReal tau_invariant_closed_form(const TransferOperator& t, const Measure& mu, double invariant_tol = 1e-10) {
  if (!is_invariant(t.system(), mu, invariant_tol)) throw NotInvariant("measure is not alpha-invariant");
  double s = 0.0;
  for (Index y = 0; y < t.size(); ++y) {
    if (mu[y] == 0.0) continue;
    if (t.weight(y) == 0.0) return NEG_INF;
    s += mu[y] * std::log(t.weight(y));
  }
  return ExtendedReal(s);
}

enum class Definition {
  automatic,  // new formula for invariant measures, original otherwise
  new_formula,
  original,
};

inline const char* to_string(Definition d) {
  switch (d) {
    case Definition::new_formula:
      return "new definition (m = mu)";
    case Definition::original:
      return "original definition (sup over m)";
    default:
      return "automatic";
  }
}

struct TauOptions {
  std::size_t n_max = 6;
  std::size_t random_partitions = 32;
  // sizes cycled through by the random family; 0 stands for N
  std::vector<std::size_t> partition_sizes{2, 3, 0};
  bool pullback_joins = true;
  std::uint64_t seed = 0;
  double invariant_tol = 1e-10;
  Definition definition = Definition::automatic;
  SolverOptions solver;
};

/// One member of the search family over which the infimum is taken.
struct Candidate {
  std::size_t n;
  std::string label;
  const PartitionOfUnity* partition;
};

/// Enumerates the (n, D) grid: for each n = 1..n_max, the singleton partition,
/// the random partitions, then the pullback joins g * (h o alpha^n) of the
/// singletons and of each random partition with the singletons.
inline void for_each_candidate(const TransferOperator& t, const TauOptions& opts,
                               const std::function<void(const Candidate&)>& visit) {
  const auto& sys = t.system();
  const PartitionOfUnity singletons = singleton_partition(sys);
  std::vector<PartitionOfUnity> randoms;
  for (std::size_t i = 0; i < opts.random_partitions; ++i) {
    std::size_t k = opts.partition_sizes.empty() ? 2 : opts.partition_sizes[i % opts.partition_sizes.size()];
    if (k == 0) k = sys.size();
    randoms.push_back(random_partition(sys, k, derive_seed(opts.seed, i)));
  }
  for (std::size_t n = 1; n <= opts.n_max; ++n) {
    visit({n, "singletons", &singletons});
    for (std::size_t i = 0; i < randoms.size(); ++i) visit({n, "random[" + std::to_string(i) + "]", &randoms[i]});
    if (!opts.pullback_joins) continue;
    const PartitionOfUnity ss = pullback_join(sys, singletons, singletons, n);
    visit({n, "pullback(singletons,singletons)", &ss});
    for (std::size_t i = 0; i < randoms.size(); ++i) {
      const PartitionOfUnity rs = pullback_join(sys, randoms[i], singletons, n);
      visit({n, "pullback(random[" + std::to_string(i) + "],singletons)", &rs});
    }
  }
}

struct TEntropyResult {
  ExtendedReal tau = NEG_INF;
  Definition definition = Definition::new_formula;
  std::size_t best_n = 0;
  std::string best_label;
  PartitionOfUnity best_partition;
  std::optional<Measure> best_m;
  std::size_t evaluations = 0;
  std::size_t unconverged_solves = 0;
};

/// tau(mu) = inf over n <= n_max and the candidate family of tau_n(mu, D) / n,
/// where tau_n is tau'_n for invariant mu and the sup form otherwise (unless
/// opts.definition forces one). Ties keep the earlier candidate.
inline TEntropyResult tau(const TransferOperator& t, const Measure& mu, const TauOptions& opts = {}) {
  if (opts.n_max < 1) throw Error("n_max must be at least 1");
  if (mu.size() != t.size()) throw SizeMismatch("measure length does not match the phase space");
  TEntropyResult res;
  res.definition = opts.definition;
  if (res.definition == Definition::automatic) {
    res.definition =
        is_invariant(t.system(), mu, opts.invariant_tol) ? Definition::new_formula : Definition::original;
  }
  bool have = false;
  for_each_candidate(t, opts, [&](const Candidate& cand) {
    ExtendedReal value;
    std::optional<Measure> m;
    if (res.definition == Definition::new_formula) {
      value = tau_prime_n(t, mu, *cand.partition, cand.n);
    } else {
      auto rep = tau_n_sup(t, mu, *cand.partition, cand.n, opts.solver);
      if (!rep.converged && !rep.value.is_neg_inf()) ++res.unconverged_solves;
      value = rep.value;
      m = std::move(rep.argmax);
    }
    ++res.evaluations;
    const ExtendedReal normalized = value / static_cast<double>(cand.n);
    if (!have || normalized < res.tau) {
      have = true;
      res.tau = normalized;
      res.best_n = cand.n;
      res.best_label = cand.label;
      res.best_partition = *cand.partition;
      res.best_m = std::move(m);
    }
  });
  return res;
}

}  // namespace tentropy
