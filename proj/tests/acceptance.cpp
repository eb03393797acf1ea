// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tentropy/io.hpp"
#include "tentropy/random.hpp"
#include "tentropy/sweep.hpp"

using namespace tentropy;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

RandomSystem sys_for(std::uint64_t seed, std::size_t max_points) {
  RandomSystemParams p;
  p.max_points = max_points;
  return random_system(p, seed);
}

std::vector<double> rand_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// power engine vs exact cycle maximum
Outcome spectral_engines() {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rs = sys_for(derive_seed(7, trial), 50);
    const auto exact = log_spectral_radius_cycles(rs.op, rs.phi).log_radius;
    const auto approx = log_spectral_radius_power(rs.op, rs.phi).log_radius;
    const double oracle_val = oracle::max_cycle_mean(rs.op.system().alpha(), rs.op.weights(), rs.phi.values());
    const ExtendedReal o = std::isinf(oracle_val) ? NEG_INF : ExtendedReal(oracle_val);
    worst = std::max({worst, distance(exact, approx), distance(exact, o)});
  }
  return {worst <= 1e-3, fmt("100 systems N<=50, max |power - cycles| = %.3g (tol 1e-3)", worst)};
}

Outcome homological() {
  std::mt19937_64 rng(43);
  double worst1 = 0.0, worstk = 0.0, min_image = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto rs = sys_for(derive_seed(43, trial), 30);
    const auto& sys = rs.op.system();
    const std::size_t n = rs.op.size();
    for (int s = 0; s < 100; ++s) {
      const auto f = rand_vec(rng, n, -1, 1), g = rand_vec(rng, n, -1, 1);
      for (double v : rs.op.apply(rand_vec(rng, n, 0, 1))) min_image = std::min(min_image, v);
      const auto fa = sys.compose(f);
      std::vector<double> prod(n);
      for (Index y = 0; y < n; ++y) prod[y] = fa[y] * g[y];
      const auto lhs = rs.op.apply(prod), ag = rs.op.apply(g);
      for (Index x = 0; x < n; ++x) worst1 = std::max(worst1, std::abs(lhs[x] - f[x] * ag[x]));
    }
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto g = rand_vec(rng, n, -1, 1), h = rand_vec(rng, n, -1, 1);
      const auto hk = sys.compose(h, k);
      std::vector<double> prod(n);
      for (Index y = 0; y < n; ++y) prod[y] = g[y] * hk[y];
      const auto lhs = power_apply(rs.op, k, prod), rhs = power_apply(rs.op, k, g);
      for (Index x = 0; x < n; ++x) worstk = std::max(worstk, std::abs(lhs[x] - h[x] * rhs[x]));
    }
  }
  return {worst1 <= 1e-12 && worstk <= 1e-10 && min_image >= 0.0,
          fmt("20 systems x 100 pairs, residual %.3g (tol 1e-12), iterated %.3g (tol 1e-10)", worst1, worstk)};
}

Outcome sweep_suite(sweep::Suite s, const char* what) {
  const auto cfg = sweep::default_config(s);
  const auto rows = sweep::run_suite(s, cfg, 0);
  double worst_gap = 0.0, worst_aux = 0.0;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    worst_gap = std::max(worst_gap, std::abs(r.gap));
    if (std::isfinite(r.aux)) worst_aux = std::max(worst_aux, r.aux);
    failed += r.pass ? 0 : 1;
  }
  std::ostringstream os;
  os << rows.size() << " systems N<=" << cfg.max_points << ", " << what << ", max |gap| = " << worst_gap
     << ", aux = " << worst_aux << ", tol " << cfg.tol << ", failed " << failed;
  return {failed == 0, os.str()};
}

Outcome neg_inf_conventions() {
  bool ok = true;
  const auto dead = from_weights(build_system({0, 1}), {1, 0});
  const auto s = singleton_partition(dead.system());
  ok = ok && tau_prime_n(dead, Measure::dirac(2, 1), s, 1).is_neg_inf();  // mu(g)>0, mu(Ag)=0
  ok = ok && tau_prime_n(dead, Measure::dirac(2, 0), s, 1) == ExtendedReal(0.0);  // mu(g)=0 drops out
  ok = ok && tau(dead, Measure::dirac(2, 1)).tau.is_neg_inf();
  const auto zero = from_weights(build_system({1, 0, 2}), {0, 0, 0});
  ok = ok && log_spectral_radius_cycles(zero, Potential::zero(3)).log_radius.is_neg_inf();
  ok = ok && log_spectral_radius_power(zero, Potential::zero(3)).log_radius.is_neg_inf();
  ok = ok && io::to_json(NEG_INF).dump() == "\"-inf\"";
  ok = ok && legendre_dual_tau(zero, Measure::uniform(3)).numeric.is_neg_inf();
  ok = ok && (NEG_INF + ExtendedReal(5.0)).is_neg_inf() && max(NEG_INF, ExtendedReal(-1e300)) == ExtendedReal(-1e300);
  return {ok, "vanishing image, zero-mass members, dead cycles, serialization"};
}

Outcome oscillation_and_chain() {
  double worst_osc_excess = -1.0, worst_chain = -1e300;
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 25; ++trial) {
    const auto rs = sys_for(derive_seed(113, trial), 6);
    const auto& sys = rs.op.system();
    const auto mu = random_invariant_measure(sys, cycle_decomposition(sys), rng);
    const auto d = random_partition(sys, 1 + trial % 3, derive_seed(114, trial));
    const auto b = oracle::dense_matrix(sys.alpha(), rs.op.weights());
    for (double eps : {0.5, 0.1, 0.01}) {
      for (std::size_t n = 1; n <= 2; ++n) {
        const auto e_part = oscillation_refinement(rs.op, d, n, eps);
        for (const auto& g : d) {
          const auto ang = power_apply(rs.op, n, g);
          for (const auto& h : e_part) {
            double lo = INFINITY, hi = -INFINITY;
            for (Index x = 0; x < sys.size(); ++x) {
              if (h[x] > 0) lo = std::min(lo, ang[x]), hi = std::max(hi, ang[x]);
            }
            worst_osc_excess = std::max(worst_osc_excess, (hi - lo) - eps);
          }
        }
        const auto lhs = tau_n_sup(rs.op, mu, pullback_join(sys, d, e_part, n), n).value;
        double rhs = eps;
        for (const auto& g : d) {
          const double a = mu.integrate(g);
          if (a > 0) rhs += a * std::log((mu.integrate(oracle::mat_power_vec(b, n, g)) + eps) / a);
        }
        if (!lhs.is_neg_inf()) worst_chain = std::max(worst_chain, lhs.value() - rhs);
      }
    }
  }
  return {worst_osc_excess < 0.0 && worst_chain <= 1e-6,
          fmt("max(osc - eps) = %.3g (<0), max(lhs - rhs) = %.3g (slack 1e-6)", worst_osc_excess, worst_chain)};
}

Outcome solver() {
  bool ok = true;
  const std::vector<double> c{0.3, 0.7};
  const auto basis = simplex_log_maximize(c, {{1, 0}, {0, 1}});
  const double arg_err = std::max(std::abs(basis.argmax[0] - 0.3), std::abs(basis.argmax[1] - 0.7));
  ok = ok && arg_err <= 1e-10;
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_drop = 0.0, worst_mc = -1e300;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t k = 1 + inst % 5, n = 2 + inst % 6;
    const auto cc = oracle::simplex_point(k, rng);
    std::vector<std::vector<double>> v(k, std::vector<double>(n));
    for (auto& vg : v) {
      for (auto& x : vg) x = u(rng) < 0.2 ? 0.0 : u(rng) * 3;
      vg[inst % n] += 0.1;
    }
    SolverOptions opts;
    opts.record_history = true;
    const auto rep = simplex_log_maximize(cc, v, opts);
    for (std::size_t i = 1; i < rep.history.size(); ++i)
      worst_drop = std::max(worst_drop, rep.history[i - 1] - rep.history[i]);
    for (int s = 0; s < 1000; ++s) {
      const auto m = oracle::simplex_point(n, rng);
      double f = 0.0;
      for (std::size_t g = 0; g < k; ++g) f += cc[g] * std::log(oracle::dot(m, v[g]));
      worst_mc = std::max(worst_mc, f - rep.value.value());
    }
  }
  ok = ok && worst_drop <= 1e-13 && worst_mc <= 0.0;
  return {ok, fmt("argmax error %.3g (tol 1e-10), max history drop %.3g", arg_err, worst_drop) +
                  fmt(", max(MC - solver) = %.3g (<=0)", worst_mc)};
}

Outcome singleton_optimality() {
  std::mt19937_64 rng(107);
  double worst = -1e300;
  bool inf_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto rs = sys_for(derive_seed(107, trial), 8);
    const auto& sys = rs.op.system();
    const auto mu = random_invariant_measure(sys, cycle_decomposition(sys), rng);
    const auto base = tau_prime_n(rs.op, mu, singleton_partition(sys), 1);
    for (int k = 0; k < 1000; ++k) {
      const auto d = random_partition(sys, 2 + k % 4, derive_seed(derive_seed(108, trial), k));
      const auto v = tau_prime_n(rs.op, mu, d, 1);
      if (v.is_neg_inf()) {
        inf_ok = inf_ok && base.is_neg_inf();
      } else if (!base.is_neg_inf()) {
        worst = std::max(worst, base.value() - v.value());
      }
    }
  }
  return {inf_ok && worst <= 1e-9, fmt("50 systems x 1000 partitions, max(singletons - D) = %.3g (tol 1e-9)", worst)};
}

Outcome conditional_expectation() {
  std::mt19937_64 rng(127);
  bool unit = true, ok = true;
  double worst_tau = -1e300, worst_lambda = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 10;
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const FiniteSystem sys(perm);
    std::vector<double> mass(n);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (const auto& c : cycle_decomposition(sys)) {
      const double m = u(rng);
      for (Index x : c.points) mass[x] = m;
    }
    const auto t = from_measure_space(sys, mass);
    unit = unit && t.apply(std::vector<double>(n, 1.0)) == std::vector<double>(n, 1.0);
    const auto lam = log_spectral_radius_cycles(t, Potential::zero(n)).log_radius;
    ok = ok && !lam.is_neg_inf();
    if (!lam.is_neg_inf()) worst_lambda = std::max(worst_lambda, std::abs(lam.value()));
    const auto mu = random_invariant_measure(sys, cycle_decomposition(sys), rng);
    const auto v = tau(t, mu).tau;
    ok = ok && !v.is_neg_inf();
    if (!v.is_neg_inf()) worst_tau = std::max(worst_tau, v.value());
  }
  return {unit && ok && worst_lambda == 0.0 && worst_tau <= 1e-9,
          std::string("20 permutation mass spaces, A1 == 1 exactly: ") + (unit ? "yes" : "no") + fmt(", max |lambda(0)| = %.3g, max tau = %.3g", worst_lambda, worst_tau)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"spectral radius: power engine vs cycle maximum", spectral_engines},
      {"positivity and homological identity", homological},
      {"old and new definitions agree on invariant measures",
       [] { return sweep_suite(sweep::Suite::equiv, "cycle measures + 3 mixtures, n<=4"); }},
      {"variational principle", [] { return sweep_suite(sweep::Suite::vp, "cycle measures + 100 mixtures"); }},
      {"-inf conventions", neg_inf_conventions},
      {"oscillation refinement and epsilon-bound chain", oscillation_and_chain},
      {"simplex solver", solver},
      {"singleton optimality", singleton_optimality},
      {"Legendre dual matches search",
       [] { return sweep_suite(sweep::Suite::legendre, "cycle measures + 1 mixture"); }},
      {"conditional expectation operator", conditional_expectation},
  };
  const auto start = std::chrono::steady_clock::now();
  int failed = 0, idx = 0;
  for (const auto& [name, fn] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", int(criteria.size()) - failed, criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
