#include "busyq/log_value.hpp"

#include <cstdio>

namespace busyq {

LogValue operator+(LogValue a, LogValue b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.log_abs_ < b.log_abs_) std::swap(a, b);
  const double d = b.log_abs_ - a.log_abs_;
  if (a.sign_ == b.sign_) return LogValue(a.sign_, a.log_abs_ + std::log1p(std::exp(d)));
  if (d == 0.0) return {};
  return LogValue(a.sign_, a.log_abs_ + std::log1p(-std::exp(d)));
}

double relative_difference(LogValue a, LogValue b) {
  if (a.sign() != b.sign()) return std::numeric_limits<double>::infinity();
  if (a.is_zero()) return 0.0;
  return std::fabs(std::expm1(a.log_abs() - b.log_abs()));
}

LogValue::Scientific LogValue::scientific() const {
  if (is_zero()) return {0.0, 0};
  const double l10 = log10_abs();
  auto exponent = static_cast<long>(std::floor(l10));
  double mantissa = std::pow(10.0, l10 - static_cast<double>(exponent));
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    ++exponent;
  }
  return {sign_ * mantissa, exponent};
}

std::string LogValue::to_string(int digits) const {
  if (!is_finite()) return sign_ > 0 ? "inf" : "-inf";
  auto [m, e] = scientific();
  const double scale = std::pow(10.0, digits - 1);
  if (std::fabs(std::round(m * scale) / scale) >= 10.0) {
    m /= 10.0;
    ++e;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*fe%+03ld", digits - 1, m, e);
  return buf;
}

}  // namespace busyq
