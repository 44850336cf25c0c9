#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace busyq {

/// Real number stored as sign and natural-log magnitude, so that moments such
/// as E[B^8] ~ 1e351 stay representable. Zero has sign 0.
class LogValue {
 public:
  constexpr LogValue() = default;

  static LogValue from_double(double x) {
    if (x == 0.0) return {};
    return LogValue(x > 0 ? 1 : -1, std::log(std::fabs(x)));
  }
  static LogValue from_log(double log_abs, int sign = 1) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
    return LogValue(sign > 0 ? 1 : -1, log_abs);
  }
  static LogValue zero() { return {}; }

  int sign() const noexcept { return sign_; }
  double log_abs() const noexcept { return log_abs_; }
  bool is_zero() const noexcept { return sign_ == 0; }
  bool is_finite() const noexcept { return sign_ == 0 || std::isfinite(log_abs_); }

  /// Value as a double; +-inf beyond the double range.
  double value() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }
  double log10_abs() const { return log_abs_ / std::log(10.0); }

  /// Decimal mantissa in [1, 10) and exponent such that |x| = mantissa * 10^exponent.
  struct Scientific {
    double mantissa;
    long exponent;
  };
  Scientific scientific() const;

  /// Scientific notation with `digits` significant digits, e.g. "3.9049849e+00".
  std::string to_string(int digits = 8) const;

  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero() || b.is_zero()) return {};
    return LogValue(a.sign_ * b.sign_, a.log_abs_ + b.log_abs_);
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    if (a.is_zero()) return {};
    return LogValue(a.sign_ * b.sign_, a.log_abs_ - b.log_abs_);
  }
  friend LogValue operator+(LogValue a, LogValue b);
  friend LogValue operator-(LogValue a, LogValue b) { return a + LogValue(-b.sign_, b.log_abs_); }

  /// |a/b - 1| evaluated in log space; both must be nonzero with equal sign.
  friend double relative_difference(LogValue a, LogValue b);

 private:
  constexpr LogValue(int sign, double log_abs) : sign_(sign), log_abs_(log_abs) {}

  int sign_ = 0;
  double log_abs_ = -std::numeric_limits<double>::infinity();
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace busyq
