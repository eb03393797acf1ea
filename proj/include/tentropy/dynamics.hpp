#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tentropy/errors.hpp"

namespace tentropy {

using Index = std::size_t;

/// A self-map alpha of the finite phase space {0, ..., N-1}.
class FiniteSystem {
 public:
  FiniteSystem() = default;

  // Throws OutOfRange naming the first bad entry.
  explicit FiniteSystem(std::span<const long long> alpha) {
    if (alpha.empty()) throw Error("a finite system needs at least one point");
    const auto n = static_cast<long long>(alpha.size());
    alpha_.reserve(alpha.size());
    for (std::size_t y = 0; y < alpha.size(); ++y) {
      if (alpha[y] < 0 || alpha[y] >= n) throw OutOfRange(y, alpha[y]);
      alpha_.push_back(static_cast<Index>(alpha[y]));
    }
  }

  explicit FiniteSystem(std::vector<Index> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw Error("a finite system needs at least one point");
    for (std::size_t y = 0; y < alpha_.size(); ++y) {
      if (alpha_[y] >= alpha_.size()) throw OutOfRange(y, static_cast<long long>(alpha_[y]));
    }
  }

  std::size_t size() const { return alpha_.size(); }
  Index operator()(Index y) const { return alpha_[y]; }
  const std::vector<Index>& alpha() const { return alpha_; }

  // alpha applied n times.
  Index iterate(Index y, std::size_t n) const {
    for (std::size_t j = 0; j < n; ++j) y = alpha_[y];
    return y;
  }

  // (f o alpha^n)(y) = f(alpha^n y)
  std::vector<double> compose(std::span<const double> f, std::size_t n = 1) const {
    std::vector<double> out(size());
    for (Index y = 0; y < size(); ++y) out[y] = f[iterate(y, n)];
    return out;
  }

  friend bool operator==(const FiniteSystem&, const FiniteSystem&) = default;

 private:
  std::vector<Index> alpha_;
};

inline FiniteSystem build_system(std::span<const long long> alpha) { return FiniteSystem(alpha); }
inline FiniteSystem build_system(std::initializer_list<long long> alpha) {
  return FiniteSystem(std::span<const long long>(alpha.begin(), alpha.size()));
}

/// Periodic orbit c0 -> c1 -> ... -> c_{L-1} -> c0, listed from its smallest point.
struct Cycle {
  std::vector<Index> points;

  std::size_t length() const { return points.size(); }
  Index smallest() const { return *std::min_element(points.begin(), points.end()); }
  bool contains(Index x) const { return std::find(points.begin(), points.end(), x) != points.end(); }

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Throws NotACycle unless `c` is a closed orbit of distinct points of `sys`.
inline void check_cycle(const FiniteSystem& sys, const Cycle& c) {
  if (c.points.empty()) throw NotACycle("empty cycle");
  std::vector<bool> seen(sys.size(), false);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const Index p = c.points[i];
    if (p >= sys.size()) throw NotACycle("cycle point " + std::to_string(p) + " is outside the phase space");
    if (seen[p]) throw NotACycle("cycle repeats point " + std::to_string(p));
    seen[p] = true;
    const Index next = c.points[(i + 1) % c.points.size()];
    if (sys(p) != next) {
      throw NotACycle("alpha(" + std::to_string(p) + ") = " + std::to_string(sys(p)) + ", expected " +
                      std::to_string(next));
    }
  }
}

/// All periodic orbits of alpha, ordered by smallest member; each cycle starts
/// at its smallest member.
inline std::vector<Cycle> cycle_decomposition(const FiniteSystem& sys) {
  const std::size_t n = sys.size();
  // 0 = unvisited, 1 = on the current walk, 2 = finished
  std::vector<unsigned char> state(n, 0);
  std::vector<bool> periodic(n, false);
  std::vector<Index> walk;
  for (Index start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    Index x = start;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = sys(x);
    }
    if (state[x] == 1) {
      // closed a new cycle at x
      for (Index p = x;;) {
        periodic[p] = true;
        p = sys(p);
        if (p == x) break;
      }
    }
    for (Index p : walk) state[p] = 2;
  }

  std::vector<Cycle> cycles;
  std::vector<bool> taken(n, false);
  for (Index x = 0; x < n; ++x) {
    if (!periodic[x] || taken[x]) continue;
    Cycle c;
    for (Index p = x; !taken[p]; p = sys(p)) {
      taken[p] = true;
      c.points.push_back(p);
    }
    cycles.push_back(std::move(c));
  }
  return cycles;
}

/// Probability vector on the phase space. Normalization is checked, never applied.
class Measure {
 public:
  static constexpr double kDefaultSumTol = 1e-12;

  Measure() = default;

  explicit Measure(std::vector<double> weights, double sum_tol = kDefaultSumTol) : w_(std::move(weights)) {
    if (w_.empty()) throw InvalidMeasure("measure has no points");
    double total = 0.0;
    for (std::size_t x = 0; x < w_.size(); ++x) {
      if (!std::isfinite(w_[x]) || w_[x] < 0.0) {
        throw InvalidMeasure("measure weight at point " + std::to_string(x) + " is negative or not finite");
      }
      total += w_[x];
    }
    if (std::abs(total - 1.0) > sum_tol) {
      throw InvalidMeasure("measure weights sum to " + std::to_string(total) + ", not 1");
    }
  }

  static Measure dirac(std::size_t n, Index x) {
    std::vector<double> w(n, 0.0);
    w.at(x) = 1.0;
    return Measure(std::move(w));
  }

  static Measure uniform(std::size_t n) { return Measure(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

  std::size_t size() const { return w_.size(); }
  double operator[](Index x) const { return w_[x]; }
  const std::vector<double>& weights() const { return w_; }

  /// mu(f) = sum_x f(x) mu(x)
  double integrate(std::span<const double> f) const {
    double s = 0.0;
    for (std::size_t x = 0; x < w_.size(); ++x) s += f[x] * w_[x];
    return s;
  }

  double total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<double> w_;
};

inline Measure cycle_measure(const FiniteSystem& sys, const Cycle& c) {
  check_cycle(sys, c);
  std::vector<double> w(sys.size(), 0.0);
  const double mass = 1.0 / static_cast<double>(c.length());
  for (Index p : c.points) w[p] = mass;
  return Measure(std::move(w));
}

/// (alpha_* v)(x) = sum over preimages y of x of v(y); works on raw vectors.
inline std::vector<double> pushforward(const FiniteSystem& sys, std::span<const double> v) {
  std::vector<double> out(sys.size(), 0.0);
  for (Index y = 0; y < sys.size(); ++y) out[sys(y)] += v[y];
  return out;
}

// Total mass is preserved, so the image is a measure under the same tolerance.
inline Measure pushforward(const FiniteSystem& sys, const Measure& mu) {
  return Measure(pushforward(sys, std::span<const double>(mu.weights())), 1e-9);
}

inline bool is_invariant(const FiniteSystem& sys, const Measure& mu, double tol) {
  const auto image = pushforward(sys, std::span<const double>(mu.weights()));
  for (Index x = 0; x < sys.size(); ++x) {
    if (std::abs(image[x] - mu[x]) > tol) return false;
  }
  return true;
}

inline Measure mix(std::span<const Measure> measures, std::span<const double> coeffs) {
  if (measures.empty() || measures.size() != coeffs.size()) {
    throw BadCoefficients("need one coefficient per measure");
  }
  double total = 0.0;
  for (double c : coeffs) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw BadCoefficients("coefficients must be nonnegative");
    total += c;
  }
  if (std::abs(total - 1.0) > 1e-12) throw BadCoefficients("coefficients sum to " + std::to_string(total));
  const std::size_t n = measures.front().size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (measures[i].size() != n) throw SizeMismatch("measures live on different phase spaces");
    for (Index x = 0; x < n; ++x) w[x] += coeffs[i] * measures[i][x];
  }
  return Measure(std::move(w), 1e-11);
}

/// Mass mu puts on each cycle, in cycle_decomposition order, together with the
/// sup-norm residual between mu and the matching mixture of cycle measures.
/// The residual vanishes exactly when mu is invariant.
struct CycleMixture {
  std::vector<double> coefficients;
  double residual = 0.0;
};

inline CycleMixture cycle_mixture(const FiniteSystem& sys, const std::vector<Cycle>& cycles, const Measure& mu) {
  CycleMixture out;
  std::vector<double> rebuilt(sys.size(), 0.0);
  for (const Cycle& c : cycles) {
    double p = 0.0;
    for (Index x : c.points) p += mu[x];
    out.coefficients.push_back(p);
    for (Index x : c.points) rebuilt[x] = p / static_cast<double>(c.length());
  }
  for (Index x = 0; x < sys.size(); ++x) out.residual = std::max(out.residual, std::abs(rebuilt[x] - mu[x]));
  return out;
}

}  // namespace tentropy
