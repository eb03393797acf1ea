#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tentropy {

/// A real number or negative infinity.
///
/// Logarithms of zero masses and zero weights show up all over t-entropy and
/// spectral-radius computations, so the one non-finite value that is allowed
/// gets its own type. NaN and +inf are rejected at construction; NEG_INF
/// absorbs addition of finite values and is the neutral element of max.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw std::domain_error("ExtendedReal: value must be finite or -inf");
    }
  }

  static constexpr ExtendedReal neg_inf() {
    ExtendedReal r;
    r.value_ = -std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_neg_inf() const { return value_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_neg_inf(); }
  constexpr double value() const { return value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(ExtendedReal a, double b) { return a + ExtendedReal(-b); }
  ExtendedReal& operator+=(ExtendedReal other) { return *this = *this + other; }

  // Scaling by a positive finite factor; 0 * NEG_INF is not defined here.
  friend ExtendedReal operator*(double s, ExtendedReal a) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("ExtendedReal: scale must be positive and finite");
    if (a.is_neg_inf()) return neg_inf();
    return ExtendedReal(s * a.value_);
  }
  friend ExtendedReal operator/(ExtendedReal a, double s) { return (1.0 / s) * a; }

  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.value_ <=> b.value_; }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }

  // "-inf" for NEG_INF, otherwise 17 significant digits.
  std::string to_string() const {
    if (is_neg_inf()) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal a) { return os << a.to_string(); }

 private:
  double value_ = 0.0;
};

inline constexpr ExtendedReal NEG_INF = ExtendedReal::neg_inf();

inline ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }
inline ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }

/// ln x with ln 0 = NEG_INF. Negative input is a logic error.
inline ExtendedReal ext_log(double x) {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("ext_log: negative argument");
  if (x == 0.0) return NEG_INF;
  return ExtendedReal(std::log(x));
}

/// weight * ln(num / den) under the t-entropy summand conventions:
///   weight == 0            -> 0 (regardless of num)
///   weight > 0, num == 0   -> NEG_INF
/// den must be positive whenever weight is.
inline ExtendedReal weighted_log_ratio(double weight, double num, double den) {
  if (weight == 0.0) return ExtendedReal(0.0);
  if (num == 0.0) return NEG_INF;
  return ExtendedReal(weight * std::log(num / den));
}

/// |a - b| with NEG_INF == NEG_INF counted as distance 0 and NEG_INF vs finite as +inf.
inline double distance(ExtendedReal a, ExtendedReal b) {
  if (a.is_neg_inf() && b.is_neg_inf()) return 0.0;
  if (a.is_neg_inf() || b.is_neg_inf()) return std::numeric_limits<double>::infinity();
  return std::abs(a.value() - b.value());
}

}  // namespace tentropy
