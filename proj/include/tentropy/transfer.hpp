#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tentropy/dynamics.hpp"
#include "tentropy/errors.hpp"
#include "tentropy/extended_real.hpp"

namespace tentropy {

/// Dense row-major square matrix; only used for the matrix view of an operator
/// and the squaring engine.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  // Operator norm on (R^n, sup): the largest row sum of |entries|.
  double sup_norm() const {
    double best = 0.0;
    for (std::size_t r = 0; r < n_; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n_; ++c) s += std::abs((*this)(r, c));
      best = std::max(best, s);
    }
    return best;
  }

  SquareMatrix& operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix out(a.n_);
    for (std::size_t r = 0; r < a.n_; ++r) {
      for (std::size_t k = 0; k < a.n_; ++k) {
        const double ark = a(r, k);
        if (ark == 0.0) continue;
        for (std::size_t c = 0; c < a.n_; ++c) out(r, c) += ark * b(k, c);
      }
    }
    return out;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Real-valued function on the phase space used to tilt an operator.
class Potential {
 public:
  Potential() = default;
  explicit Potential(std::vector<double> phi) : phi_(std::move(phi)) {
    for (double v : phi_) {
      if (!std::isfinite(v)) throw Error("potential entries must be finite");
    }
  }
  static Potential zero(std::size_t n) { return Potential(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return phi_.size(); }
  double operator[](Index x) const { return phi_[x]; }
  const std::vector<double>& values() const { return phi_; }

 private:
  std::vector<double> phi_;
};

/// Transfer operator of a finite system in canonical form:
///   (A g)(x) = sum over y with alpha(y) = x of w(y) g(y).
/// Every positive operator satisfying A((f o alpha) g) = f A g on a finite
/// discrete space has this shape.
class TransferOperator {
 public:
  TransferOperator() = default;

  TransferOperator(FiniteSystem sys, std::vector<double> weights) : sys_(std::move(sys)), w_(std::move(weights)) {
    if (w_.size() != sys_.size()) throw SizeMismatch("weights must have one entry per point");
    for (std::size_t y = 0; y < w_.size(); ++y) {
      if (!(w_[y] >= 0.0) || !std::isfinite(w_[y])) throw NegativeWeight(y, w_[y]);
    }
  }

  const FiniteSystem& system() const { return sys_; }
  const std::vector<double>& weights() const { return w_; }
  double weight(Index y) const { return w_[y]; }
  std::size_t size() const { return sys_.size(); }

  std::vector<double> apply(std::span<const double> g) const {
    std::vector<double> out(size(), 0.0);
    for (Index y = 0; y < size(); ++y) out[sys_(y)] += w_[y] * g[y];
    return out;
  }

  std::vector<double> power_apply(std::size_t n, std::span<const double> g) const {
    std::vector<double> v(g.begin(), g.end());
    for (std::size_t j = 0; j < n; ++j) v = apply(v);
    return v;
  }

  /// Product of weights along the first n steps of the orbit of y:
  /// A^n 1_y = orbit_weight(n, y) * 1_{alpha^n y}.
  double orbit_weight(std::size_t n, Index y) const {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      p *= w_[y];
      y = sys_(y);
    }
    return p;
  }

  SquareMatrix to_matrix() const {
    SquareMatrix b(size());
    for (Index y = 0; y < size(); ++y) b(sys_(y), y) = w_[y];
    return b;
  }

 private:
  FiniteSystem sys_;
  std::vector<double> w_;
};

inline TransferOperator from_weights(const FiniteSystem& sys, std::vector<double> w) {
  return TransferOperator(sys, std::move(w));
}

/// Recovers (alpha, w) from a matrix, rejecting anything the homological
/// identity rules out. Entries in [-tol, 0) are read as zero.
inline TransferOperator from_matrix(const FiniteSystem& sys, const SquareMatrix& b, double tol) {
  const std::size_t n = sys.size();
  if (b.size() != n) throw SizeMismatch("matrix size does not match the phase space");
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (b(x, y) < -tol) throw NegativeEntry(x, y, b(x, y));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (sys(y) != x && b(x, y) > tol) throw SupportViolation(x, y, b(x, y));
    }
  }
  std::vector<double> w(n);
  for (Index y = 0; y < n; ++y) w[y] = std::max(0.0, b(sys(y), y));
  return TransferOperator(sys, std::move(w));
}

/// Adjoint of f -> f o alpha in L^1(m): w(y) = m(y) / m(alpha(y)).
/// When m is alpha-invariant this is a conditional expectation and A1 = 1.
inline TransferOperator from_measure_space(const FiniteSystem& sys, std::span<const double> mass) {
  if (mass.size() != sys.size()) throw SizeMismatch("mass vector must have one entry per point");
  for (std::size_t x = 0; x < mass.size(); ++x) {
    if (!(mass[x] > 0.0) || !std::isfinite(mass[x])) throw NonPositiveMass(x, mass[x]);
  }
  std::vector<double> w(sys.size());
  for (Index y = 0; y < sys.size(); ++y) w[y] = mass[y] / mass[sys(y)];
  return TransferOperator(sys, std::move(w));
}

inline std::vector<double> apply(const TransferOperator& t, std::span<const double> g) { return t.apply(g); }

/// A^n g. Sums the closed form for A^n 1_y over the support of g, which is
/// how the identity A^n 1_y = (prod_j w(alpha^j y)) 1_{alpha^n y} enters.
inline std::vector<double> power_apply(const TransferOperator& t, std::size_t n, std::span<const double> g) {
  std::vector<double> out(t.size(), 0.0);
  const auto& sys = t.system();
  for (Index y = 0; y < t.size(); ++y) {
    if (g[y] == 0.0) continue;
    out[sys.iterate(y, n)] += t.orbit_weight(n, y) * g[y];
  }
  return out;
}

/// A_phi f = A(e^phi f): weights pick up a factor e^phi.
inline TransferOperator tilt(const TransferOperator& t, const Potential& phi) {
  if (phi.size() != t.size()) throw SizeMismatch("potential must have one entry per point");
  std::vector<double> w(t.weights());
  for (Index y = 0; y < w.size(); ++y) w[y] *= std::exp(phi[y]);
  return TransferOperator(t.system(), std::move(w));
}

enum class SpectralMethod { cycles, power };

struct SpectralResult {
  ExtendedReal log_radius;
  SpectralMethod method = SpectralMethod::cycles;
  std::optional<Cycle> witness_cycle;
  std::size_t iterations = 0;
};

/// (1/|C|) * sum over the cycle of values(y) + ln w(y); NEG_INF if a weight on C is zero.
inline ExtendedReal cycle_mean(const TransferOperator& t, const Potential& phi, const Cycle& c) {
  double s = 0.0;
  for (Index y : c.points) {
    if (t.weight(y) == 0.0) return NEG_INF;
    s += phi[y] + std::log(t.weight(y));
  }
  return ExtendedReal(s / static_cast<double>(c.length()));
}

/// Exact lambda(phi) for a finite functional graph: the log spectral radius is
/// the largest cycle mean of phi + ln w. Ties go to the earliest cycle.
inline SpectralResult log_spectral_radius_cycles(const TransferOperator& t, const Potential& phi,
                                                 const std::vector<Cycle>& cycles) {
  if (phi.size() != t.size()) throw SizeMismatch("potential must have one entry per point");
  SpectralResult r;
  r.method = SpectralMethod::cycles;
  r.log_radius = NEG_INF;
  for (const Cycle& c : cycles) {
    const ExtendedReal m = cycle_mean(t, phi, c);
    if (!r.witness_cycle || m > r.log_radius) {
      r.log_radius = m;
      r.witness_cycle = c;
    }
  }
  r.iterations = cycles.size();
  return r;
}

inline SpectralResult log_spectral_radius_cycles(const TransferOperator& t, const Potential& phi) {
  return log_spectral_radius_cycles(t, phi, cycle_decomposition(t.system()));
}

inline constexpr std::size_t kDefaultSquarings = 20;
inline constexpr double kDefaultSpectralTol = 1e-3;

/// lambda(phi) from ||M^(2^k)|| with M the matrix of A_phi, rescaling to unit
/// sup-norm after every squaring and carrying the log scale separately.
/// For a positive operator ||A^n|| = ||A^n 1||_inf, the max row sum.
inline SpectralResult log_spectral_radius_power(const TransferOperator& t, const Potential& phi,
                                                std::size_t squarings = kDefaultSquarings) {
  if (squarings < 1) throw Error("squarings must be at least 1");
  SpectralResult r;
  r.method = SpectralMethod::power;
  r.iterations = squarings;

  SquareMatrix m = tilt(t, phi).to_matrix();
  double scale = m.sup_norm();
  if (scale == 0.0) {
    r.log_radius = NEG_INF;
    return r;
  }
  m *= 1.0 / scale;
  double log_norm = std::log(scale);  // ln ||M^(2^j)||, j squarings so far
  for (std::size_t j = 0; j < squarings; ++j) {
    m = m * m;
    scale = m.sup_norm();
    if (scale == 0.0) {
      r.log_radius = NEG_INF;
      return r;
    }
    m *= 1.0 / scale;
    log_norm = 2.0 * log_norm + std::log(scale);
  }
  r.log_radius = ExtendedReal(std::ldexp(log_norm, -static_cast<int>(squarings)));
  return r;
}

}  // namespace tentropy
