#pragma once

#include <optional>
#include <string>
#include <vector>

#include "busyq/distributions.hpp"
#include "busyq/log_value.hpp"
#include "busyq/quadrature.hpp"

namespace busyq {

enum class MomentProvenance {
  ClosedFormG1,
  ClosedFormBeta,
  RecurrenceAnalyticC,
  RecurrenceQuadratureC,
  ExponentialReference,
  MonteCarlo,
};

std::string_view to_string(MomentProvenance p);

/// Raw busy-period moments E[B^1..B^N] in log-magnitude form.
struct MomentSet {
  double lambda = 0.0;
  double rho = 0.0;
  std::vector<LogValue> log_moments;  // index 0 holds E[B^1]
  MomentProvenance provenance = MomentProvenance::ClosedFormG1;
  /// Smallest order whose moment is formally infinite; values at and above it
  /// are effective moments under the quadrature horizon.
  std::optional<int> divergent_from;
  /// Busy period identically zero (beta = -lambda).
  bool degenerate = false;
  std::vector<std::string> warnings;

  int n_max() const { return static_cast<int>(log_moments.size()); }
  const LogValue& moment(int n) const { return log_moments.at(static_cast<std::size_t>(n - 1)); }
  bool is_divergent(int n) const { return divergent_from && n >= *divergent_from; }
};

/// D_n = (-1)^n C^(n)(0) = int t^n e^{-lambda I(t)} lambda (1 - G(t)) dt, n = 0..N-1.
struct CDerivatives {
  enum class Source { AnalyticDeterministic, Quadrature };
  std::vector<double> d;
  Source source = Source::Quadrature;
  /// Smallest index n for which the integral of D_n diverges.
  std::optional<int> divergent_from;
  std::vector<QuadratureResult> diagnostics;  // one per D_n for the quadrature source
};

struct ShapeStats {
  double delta1 = 0.0;  // coefficient of variation
  double delta2 = 0.0;  // mu3^2 / mu2^3
  double delta3 = 0.0;  // mu4 / mu2^2
  /// Built from truncated effective moments of a formally divergent law.
  bool from_truncated = false;
};

/// E[B^n] = (1 - e^{-rho}) n! / (lambda e^{-rho})^n.
MomentSet closed_moments_g1(double lambda, double rho, int n_max);

/// Atom-plus-exponential mixture: E[B^n] = w n! / theta^n with
/// w = (lambda + beta)(1 - e^{-rho}) / lambda, theta = e^{-rho}(lambda + beta).
MomentSet closed_moments_beta(double lambda, double rho, double beta, int n_max);

/// D_0 = 1 - e^{-rho}, D_n = (n / lambda) D_{n-1} - e^{-rho} alpha^n.
CDerivatives c_derivatives_deterministic(double lambda, double alpha, int n_max);

/// D_0..D_{n_max-1} by quadrature; divergence handling follows settings.tail_policy.
CDerivatives c_derivatives_quadrature(const QueueConfig& config, int n_max,
                                      const QuadratureSettings& settings = {});

/// E[B^n] = e^rho [ (n/lambda) D_{n-1} + sum_{p=1}^{n-1} C(n,p) E[B^{n-p}] D_p ],
/// accumulated with log-sum-exp.
MomentSet moments_recurrence(const CDerivatives& cderivs, double lambda, double rho, int n_max);

/// E[X^n] = n! mu^n.
MomentSet exponential_reference_moments(double mu, int n_max);

/// Central-moment ratios from E[B^1..B^4]. Divergent inputs throw unless the
/// policy is TruncateAndWarn, in which case the result is flagged.
ShapeStats shape_stats(const MomentSet& moments, TailPolicy policy = TailPolicy::ErrorIfDivergent);

enum class MomentEngine { Auto, ClosedForm, AnalyticC, Quadrature };

/// Picks the strongest available route: closed form for the beta family,
/// analytic D_n for deterministic service, quadrature otherwise.
MomentSet busy_moments(const QueueConfig& config, int n_max, const QuadratureSettings& settings = {},
                       MomentEngine engine = MomentEngine::Auto);

/// log C(n, p); exact for moderate n, log-Gamma beyond.
double log_binomial(int n, int p);

}  // namespace busyq
