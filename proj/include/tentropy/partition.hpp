#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tentropy/dynamics.hpp"
#include "tentropy/errors.hpp"
#include "tentropy/transfer.hpp"

namespace tentropy {

/// Finite family of nonnegative functions on the phase space summing to 1
/// at every point. Identically zero members are never stored.
class PartitionOfUnity {
 public:
  using Function = std::vector<double>;

  PartitionOfUnity() = default;

  std::size_t size() const { return elements_.size(); }
  std::size_t points() const { return n_; }
  const std::vector<Function>& elements() const { return elements_; }
  const Function& operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  // Largest pointwise deviation of the element sum from 1.
  double sum_defect() const {
    double worst = 0.0;
    for (std::size_t x = 0; x < n_; ++x) {
      double s = 0.0;
      for (const auto& e : elements_) s += e[x];
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }

  friend bool operator==(const PartitionOfUnity&, const PartitionOfUnity&) = default;

 private:
  friend PartitionOfUnity validate(std::vector<Function> candidate, double tol);
  friend PartitionOfUnity make_partition_unchecked(std::size_t n, std::vector<Function> elements);

  std::size_t n_ = 0;
  std::vector<Function> elements_;
};

namespace detail {
inline bool is_zero(const PartitionOfUnity::Function& f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
}
}  // namespace detail

// For constructors whose output is a partition by construction; only drops zeros.
inline PartitionOfUnity make_partition_unchecked(std::size_t n, std::vector<PartitionOfUnity::Function> elements) {
  PartitionOfUnity p;
  p.n_ = n;
  for (auto& e : elements) {
    if (!detail::is_zero(e)) p.elements_.push_back(std::move(e));
  }
  return p;
}

inline constexpr double kPartitionTol = 1e-10;

/// Accepts entries >= -tol (negatives clamped to 0) and pointwise sums within
/// tol of 1; throws NotAPartition at the worst point otherwise.
inline PartitionOfUnity validate(std::vector<PartitionOfUnity::Function> candidate, double tol) {
  if (candidate.empty()) throw Error("a partition of unity needs at least one element");
  const std::size_t n = candidate.front().size();
  for (const auto& e : candidate) {
    if (e.size() != n) throw SizeMismatch("partition elements have different lengths");
  }
  std::size_t worst_point = 0;
  double worst_sum = 1.0;
  double worst_dev = -1.0;
  bool negative = false;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    bool neg_here = false;
    for (const auto& e : candidate) {
      if (!std::isfinite(e[x])) throw NotAPartition(x, e[x]);
      s += e[x];
      if (e[x] < -tol) neg_here = true;
    }
    const double dev = std::abs(s - 1.0);
    if (neg_here && !negative) {
      negative = true;
      worst_point = x;
      worst_sum = s;
      worst_dev = dev;
    } else if (neg_here == negative && dev > worst_dev) {
      worst_point = x;
      worst_sum = s;
      worst_dev = dev;
    }
  }
  if (negative || worst_dev > tol) throw NotAPartition(worst_point, worst_sum);

  for (auto& e : candidate) {
    for (double& v : e) v = std::max(v, 0.0);
  }
  PartitionOfUnity p;
  p.n_ = n;
  for (auto& e : candidate) {
    if (!detail::is_zero(e)) p.elements_.push_back(std::move(e));
  }
  return p;
}

inline PartitionOfUnity unit_partition(std::size_t n) {
  return make_partition_unchecked(n, {PartitionOfUnity::Function(n, 1.0)});
}

inline PartitionOfUnity singleton_partition(const FiniteSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<PartitionOfUnity::Function> els(n, PartitionOfUnity::Function(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) els[x][x] = 1.0;
  return make_partition_unchecked(n, std::move(els));
}

/// All pointwise products d * e, zeros dropped, in (d-major, e-minor) order.
inline PartitionOfUnity join(const PartitionOfUnity& d, const PartitionOfUnity& e) {
  if (d.points() != e.points()) throw SizeMismatch("join of partitions on different phase spaces");
  const std::size_t n = d.points();
  std::vector<PartitionOfUnity::Function> out;
  out.reserve(d.size() * e.size());
  for (const auto& g : d) {
    for (const auto& h : e) {
      PartitionOfUnity::Function f(n);
      for (std::size_t x = 0; x < n; ++x) f[x] = g[x] * h[x];
      out.push_back(std::move(f));
    }
  }
  return make_partition_unchecked(n, std::move(out));
}

/// The partition {g * (h o alpha^n) : g in D, h in E}.
inline PartitionOfUnity pullback_join(const FiniteSystem& sys, const PartitionOfUnity& d, const PartitionOfUnity& e,
                                      std::size_t n) {
  if (d.points() != sys.size() || e.points() != sys.size()) {
    throw SizeMismatch("pullback join of partitions on different phase spaces");
  }
  const std::size_t size = sys.size();
  std::vector<Index> target(size);
  for (Index y = 0; y < size; ++y) target[y] = sys.iterate(y, n);

  std::vector<PartitionOfUnity::Function> out;
  out.reserve(d.size() * e.size());
  for (const auto& g : d) {
    for (const auto& h : e) {
      PartitionOfUnity::Function f(size);
      for (Index y = 0; y < size; ++y) f[y] = g[y] * h[target[y]];
      out.push_back(std::move(f));
    }
  }
  return make_partition_unchecked(size, std::move(out));
}

/// Piecewise-linear hat partition of [lo, hi] with nodes lo + i * pitch.
/// Each hat vanishes outside the open interval (node - pitch, node + pitch),
/// and at every t at most two adjacent hats are nonzero.
class HatPartition {
 public:
  HatPartition(double lo, double hi, double pitch) : lo_(lo), pitch_(pitch) {
    count_ = hi > lo ? static_cast<std::size_t>(std::ceil((hi - lo) / pitch)) + 1 : 1;
  }

  std::size_t size() const { return count_; }

  // Values (f_j(t), f_{j+1}(t)) of the two hats straddling t, with j returned.
  struct Pair {
    std::size_t left;
    double left_value;
    double right_value;
  };

  Pair evaluate(double t) const {
    if (count_ == 1) return {0, 1.0, 0.0};
    const double u = (t - lo_) / pitch_;
    const auto last = static_cast<double>(count_ - 2);
    const double j = std::clamp(std::floor(u), 0.0, last);
    const double s = std::clamp(u - j, 0.0, 1.0);
    return {static_cast<std::size_t>(j), 1.0 - s, s};
  }

 private:
  double lo_;
  double pitch_;
  std::size_t count_ = 1;
};

/// A partition E on whose members every A^n g (g in D) oscillates by less than
/// eps: for each g, hats of pitch eps/2 covering the range of A^n g are pulled
/// back through A^n g, and the resulting partitions are joined over D.
inline PartitionOfUnity oscillation_refinement(const TransferOperator& t, const PartitionOfUnity& d, std::size_t n,
                                               double eps) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  const std::size_t size = t.size();
  PartitionOfUnity refined = unit_partition(size);
  for (const auto& g : d) {
    const auto v = power_apply(t, n, g);
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) continue;  // constant: {1} already separates nothing

    const HatPartition hats(lo, hi, eps / 2.0);
    std::vector<PartitionOfUnity::Function> layer(hats.size(), PartitionOfUnity::Function(size, 0.0));
    for (std::size_t x = 0; x < size; ++x) {
      const auto p = hats.evaluate(v[x]);
      layer[p.left][x] = p.left_value;
      if (p.left + 1 < hats.size()) layer[p.left + 1][x] = p.right_value;
    }
    refined = join(refined, make_partition_unchecked(size, std::move(layer)));
  }
  return refined;
}

/// k functions whose values at each point are an independent uniform draw
/// from the (k-1)-simplex (normalized exponentials). Deterministic in seed.
inline PartitionOfUnity random_partition(const FiniteSystem& sys, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error("a partition needs at least one element");
  const std::size_t n = sys.size();
  if (k == 1) return unit_partition(n);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<PartitionOfUnity::Function> els(k, PartitionOfUnity::Function(n, 0.0));
  std::vector<double> draw(k);
  for (std::size_t x = 0; x < n; ++x) {
    double total = 0.0;
    for (auto& v : draw) {
      v = expo(rng);
      total += v;
    }
    for (std::size_t i = 0; i < k; ++i) els[i][x] = draw[i] / total;
  }
  return make_partition_unchecked(n, std::move(els));
}

}  // namespace tentropy
