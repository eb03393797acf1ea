#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tentropy/dynamics.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy {

// SplitMix64 finalizer; decorrelates seeds derived from (master, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Parameters of the sweep generator: alpha uniform over all self-maps,
/// ln w uniform in [-log_weight_range, log_weight_range], phi uniform in
/// [-potential_range, potential_range], each weight zeroed with probability
/// zero_weight_probability.
struct RandomSystemParams {
  std::size_t min_points = 1;
  std::size_t max_points = 8;
  double log_weight_range = 2.0;
  double potential_range = 1.0;
  double zero_weight_probability = 0.1;
};

struct RandomSystem {
  TransferOperator op;
  Potential phi;
};

inline RandomSystem random_system(const RandomSystemParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(p.min_points, p.max_points);
  const std::size_t n = size_dist(rng);
  std::uniform_int_distribution<std::size_t> point(0, n - 1);
  std::uniform_real_distribution<double> log_w(-p.log_weight_range, p.log_weight_range);
  std::uniform_real_distribution<double> pot(-p.potential_range, p.potential_range);
  std::bernoulli_distribution zero(p.zero_weight_probability);

  std::vector<Index> alpha(n);
  for (auto& a : alpha) a = point(rng);
  std::vector<double> w(n);
  for (auto& v : w) {
    v = std::exp(log_w(rng));
    if (zero(rng)) v = 0.0;
  }
  std::vector<double> phi(n);
  for (auto& v : phi) v = pot(rng);
  return {TransferOperator(FiniteSystem(std::move(alpha)), std::move(w)), Potential(std::move(phi))};
}

/// Uniform point of the probability simplex of dimension k - 1.
template <class Rng>
std::vector<double> random_simplex_point(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(k);
  double total = 0.0;
  for (auto& v : p) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

/// Random convex combination of the cycle measures: a random invariant measure.
template <class Rng>
Measure random_invariant_measure(const FiniteSystem& sys, const std::vector<Cycle>& cycles, Rng& rng) {
  const auto coeffs = random_simplex_point(cycles.size(), rng);
  std::vector<Measure> ms;
  ms.reserve(cycles.size());
  for (const auto& c : cycles) ms.push_back(cycle_measure(sys, c));
  // renormalized coefficient sums can miss 1 by a few ulps
  std::vector<double> w(sys.size(), 0.0);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (Index x = 0; x < sys.size(); ++x) w[x] += coeffs[i] * ms[i][x];
  }
  return Measure(std::move(w), 1e-11);
}

}  // namespace tentropy
