#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "busyq/distributions.hpp"
#include "busyq/quadrature.hpp"

namespace busyq {

/// Function tabulated at t_i = t0 + i * dt.
struct GridFunction {
  enum class Kind { Density, CDF };

  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
  Kind kind = Kind::CDF;

  std::size_t size() const { return values.size(); }
  double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double t_max() const { return values.empty() ? t0 : t(values.size() - 1); }
  /// Linear interpolation; clamps to the end values outside the grid.
  double at(double t) const;
  /// For a CDF grid: integral of e^{-st} dB with B piecewise linear and any
  /// mass beyond the grid placed at t_max.
  double laplace_stieltjes(double s) const;
};

/// max_i |g(t_i) - f(t_i)| over grid nodes with t_i in [from, to].
double sup_distance(const GridFunction& g, const std::function<double(double)>& f,
                    double from = 0.0, double to = std::numeric_limits<double>::infinity());

enum class SeriesMethod { Auto, ExplicitTerms, Renewal };

struct SeriesSettings {
  std::optional<double> dt;       // default min(alpha, 1/lambda) / 200
  std::optional<double> t_max;    // default e^rho ln(1e8) / lambda plus the service extent
  std::optional<int> n_terms;     // empty = auto
  SeriesMethod method = SeriesMethod::Auto;
  double tail_budget = 1e-8;
  std::size_t max_points = 2'000'000;
};

struct SeriesResult {
  GridFunction cdf;
  /// Terms summed explicitly; 0 when the renewal form sums the full series.
  int terms = 0;
  bool renewal = false;
  bool heavy_traffic_fallback = false;
  /// Bound on the dropped terms, sup_t of lambda^{-1} sum_{n>N} p^n h^{*n}(t).
  double truncation_bound = 0.0;
  /// Largest change made when projecting the discrete values onto monotone CDFs in [0, 1].
  double projection_adjustment = 0.0;
  std::vector<std::string> warnings;
};

/// E[e^{-sB}] = 1 + (s - 1/I(s)) / lambda, I(s) = int e^{-st - lambda I_G(t)} dt.
double lst_busy_period(const QueueConfig& config, double s, const QuadratureSettings& settings = {});

/// 1 - E[e^{-sB}], accurate as s -> 0.
double lst_busy_period_complement(const QueueConfig& config, double s, const QuadratureSettings& settings = {});

/// B(t) = 1 - lambda^{-1} sum_{n>=1} (1 - e^{-rho})^n h^{*n}(t) on a uniform grid.
SeriesResult busy_cdf_series(const QueueConfig& config, const SeriesSettings& settings = {});

/// Auto term count: smallest N whose geometric tail bound is below the budget.
int auto_series_terms(double lambda, double rho, double h_max, double tail_budget);

/// Closed-form CDF for the constant-beta family.
double busy_cdf_beta(double lambda, double rho, double beta, double t);

/// 1 - (1 - e^{-rho}) e^{-lambda e^{-rho} t}.
double busy_cdf_heavy_traffic(double lambda, double rho, double t);

/// Mean e^rho / lambda of the exponential part of the heavy-traffic law.
double heavy_traffic_mean(double lambda, double rho);

GridFunction tabulate_cdf(const std::function<double(double)>& f, double dt, double t_max);

}  // namespace busyq
