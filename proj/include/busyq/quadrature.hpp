#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace busyq {

enum class TailPolicy { ErrorIfDivergent, TruncateAndWarn };

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  /// Upper limit substituted for infinity; nullopt selects it automatically.
  std::optional<double> truncation_horizon;
  TailPolicy tail_policy = TailPolicy::ErrorIfDivergent;
  /// Largest horizon the automatic choice may return.
  double horizon_cap = 1e6;
};

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  /// Analytic bound on the integral beyond `horizon`; +inf when divergent.
  double truncated_tail_bound = 0.0;
  bool tail_divergent = false;
  /// The automatic horizon stopped at the cap before the tail bound met abs_tol.
  bool horizon_capped = false;
  double horizon = 0.0;
  int subdivisions_used = 0;
};

/// |f(t)| <= scale * t^degree * exp(-rate t) beyond the horizon.
struct ExponentialTail {
  double rate;
  double degree = 0.0;
  double scale = 1.0;
};

/// |f(t)| <= scale * t^exponent beyond the horizon; divergent when exponent >= -1.
struct PowerTail {
  double exponent;
  double scale = 1.0;
};

/// |f(t)| <= plateau(T) * t^exponent for t >= T, where plateau is a nonincreasing
/// envelope of a factor that levels off instead of decaying (e.g. e^{-lambda I(t)} -> e^{-rho}).
struct PlateauTimesPowerTail {
  double exponent;
  std::function<double(double)> plateau;
  /// Exact integral of f over [T, inf) for T >= tail_from, when known. A
  /// convergent tail is then added rather than bounded.
  std::function<double(double)> tail_integral = {};
  double tail_from = 0.0;
};

using DecayClass = std::variant<ExponentialTail, PowerTail, PlateauTimesPowerTail>;

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) integration over [a, b]. Interior breakpoints
/// become initial panel boundaries. Throws AccuracyError when the subdivision
/// budget runs out before max(abs_tol, rel_tol |value|) is met.
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureSettings& settings = {},
                                  std::span<const double> breakpoints = {});

/// Integral over [a, inf) by truncation at a horizon with an analytic tail bound.
/// Divergent tails throw DivergenceError (with `order` attached) under
/// ErrorIfDivergent, or integrate up to the horizon under TruncateAndWarn.
QuadratureResult integrate_semi_infinite(const Integrand& f, double a, const DecayClass& decay,
                                         const QuadratureSettings& settings = {},
                                         std::span<const double> breakpoints = {},
                                         int order = 0);

/// Bound on the integral of the envelope over [horizon, inf); +inf if divergent.
double tail_bound(const DecayClass& decay, double horizon);

bool is_divergent(const DecayClass& decay);

}  // namespace busyq
