#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace busyq {

enum class DistributionKind {
  Deterministic,
  Exponential,
  Power,
  ParetoFixedShape,
  ParetoFixedScale,
  BetaFamily,
  UserTabulated,
};

std::string_view to_string(DistributionKind kind);

/// Envelope of the survival function 1 - G(t) for t >= `from`, used to pick
/// quadrature horizons and bound truncated tails.
///   Bounded:     1 - G(t) = 0 for t >= parameter
///   Exponential: 1 - G(t) <= scale * exp(-parameter * t)
///   Power:       1 - G(t) <= scale * t^(-parameter)
struct SurvivalTail {
  enum class Kind { Bounded, Exponential, Power };
  Kind kind;
  double parameter;
  double scale = 1.0;
  double from = 0.0;
};

namespace law {

struct Deterministic {
  double alpha;
};

struct Exponential {
  double alpha;
};

/// G(t) = t^c on [0, 1).
struct Power {
  double c;
};

/// 1 - G(t) = (k/t)^theta for t >= k. Both Pareto variants share this form.
struct Pareto {
  double k;
  double theta;
};

/// Constant-beta member of the special service family; atom e.g. e^{-rho} at 0 when beta = 0.
struct BetaFamily {
  double lambda;
  double rho;
  double beta;
};

/// Piecewise-linear CDF through (t_i, G_i); t_0 = 0 and G_last = 1.
struct Tabulated {
  std::shared_ptr<const std::vector<double>> t;
  std::shared_ptr<const std::vector<double>> g;
  std::shared_ptr<const std::vector<double>> cumulative_tail;  // integrated tail at each node
  std::string source;
};

}  // namespace law

/// Service-time law of the M|G|inf queue. Immutable value type.
class ServiceDistribution {
 public:
  using Law = std::variant<law::Deterministic, law::Exponential, law::Power, law::Pareto,
                           law::BetaFamily, law::Tabulated>;

  DistributionKind kind() const noexcept { return kind_; }
  const Law& law() const noexcept { return law_; }

  double mean() const noexcept { return mean_; }
  double support_upper() const noexcept { return support_upper_; }
  double atom_at_zero() const noexcept { return atom_at_zero_; }
  /// Interior points where G has a kink or jump; quadrature panels must break there.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  SurvivalTail tail() const noexcept { return tail_; }
  /// True for the beta = -lambda member (G == 1, zero service times).
  bool degenerate() const noexcept { return degenerate_; }

  double cdf(double t) const;
  /// P(S < t), the left limit of the CDF.
  double cdf_left(double t) const;
  double survival(double t) const;
  double log_survival(double t) const;
  /// Integral of 1 - G over [0, t].
  double integrated_tail(double t) const;
  /// Integral of 1 - G over [t, inf) = mean - integrated_tail(t), computed without cancellation.
  double residual_tail(double t) const;
  /// Generalised inverse inf{t : G(t) >= u} for u in [0, 1).
  double quantile(double u) const;

  /// Spec-string rendering, e.g. "det:alpha=1".
  std::string describe() const;

 private:
  friend ServiceDistribution make_deterministic(double);
  friend ServiceDistribution make_exponential(double);
  friend ServiceDistribution make_power(double);
  friend ServiceDistribution make_pareto_fixed_shape(double);
  friend ServiceDistribution make_pareto_fixed_scale(double);
  friend ServiceDistribution make_beta_family(double, double, double);
  friend ServiceDistribution make_tabulated(std::vector<double>, std::vector<double>, std::string);

  ServiceDistribution(DistributionKind kind, Law law) : kind_(kind), law_(std::move(law)) {}

  DistributionKind kind_;
  Law law_;
  double mean_ = 0.0;
  double support_upper_ = 0.0;
  double atom_at_zero_ = 0.0;
  std::vector<double> breakpoints_;
  SurvivalTail tail_{SurvivalTail::Kind::Bounded, 0.0};
  bool degenerate_ = false;
};

ServiceDistribution make_deterministic(double alpha);
ServiceDistribution make_exponential(double alpha);
ServiceDistribution make_power(double c);
/// Pareto with shape 3 and scale k: mean 3k/2.
ServiceDistribution make_pareto_fixed_shape(double k);
/// Pareto with scale 0.4 and shape theta > 1: mean 0.4 theta / (theta - 1).
ServiceDistribution make_pareto_fixed_scale(double theta);
/// Requires -lambda <= beta <= lambda / (e^rho - 1). Mean is rho / lambda.
ServiceDistribution make_beta_family(double lambda, double rho, double beta);
/// Linear interpolation through (t, G); t strictly increasing from 0, G nondecreasing, ending at 1.
ServiceDistribution make_tabulated(std::vector<double> t, std::vector<double> g,
                                   std::string source = {});

/// Upper end of the admissible beta band, lambda / (e^rho - 1).
double beta_upper_bound(double lambda, double rho);

/// Arrival rate plus service law. rho is always derived.
class QueueConfig {
 public:
  QueueConfig(double lambda, ServiceDistribution service);

  double lambda() const noexcept { return lambda_; }
  const ServiceDistribution& service() const noexcept { return service_; }
  double rho() const noexcept { return lambda_ * service_.mean(); }

 private:
  double lambda_;
  ServiceDistribution service_;
};

}  // namespace busyq
