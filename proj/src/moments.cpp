#include "busyq/moments.hpp"

#include <cmath>
#include <limits>

#include "busyq/errors.hpp"

namespace busyq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_order(int n_max) {
  if (n_max < 1) throw ParameterDomainError("n_max must be >= 1");
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0 && std::isfinite(x))) throw ParameterDomainError(std::string(name) + " must be > 0");
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Integrand envelope of D_n beyond the horizon.
DecayClass d_integrand_decay(const QueueConfig& config, int n) {
  const auto& dist = config.service();
  const double lambda = config.lambda();
  const SurvivalTail tail = dist.tail();
  if (tail.kind == SurvivalTail::Kind::Exponential) {
    // e^{-lambda I} <= 1
    return ExponentialTail{tail.parameter, static_cast<double>(n), lambda * tail.scale};
  }
  // Power: lambda * scale * e^{-lambda I(T)} * t^{n - theta}
  auto plateau = [dist, lambda, scale = tail.scale](double horizon) {
    return lambda * scale * std::exp(-lambda * dist.integrated_tail(horizon));
  };
  PlateauTimesPowerTail decay{static_cast<double>(n) - tail.parameter, plateau};
  if (const auto* pa = std::get_if<law::Pareto>(&dist.law())) {
    // Beyond k, e^{-lambda I(t)} = e^{-rho} exp(lambda R(t)) with R(t) = c t^{1-theta} / lambda, so
    // the tail is a sum of pure powers integrated term by term.
    const double theta = pa->theta;
    const double k_theta = std::pow(pa->k, theta);
    const double rho = config.rho();
    decay.tail_from = pa->k;
    decay.tail_integral = [=](double horizon) {
      const double c = lambda * k_theta / (theta - 1.0);
      const double x = c * std::pow(horizon, 1.0 - theta);  // lambda R(T)
      const double lead = std::exp(-rho) * lambda * k_theta * std::pow(horizon, n - theta + 1.0);
      double sum = 0.0;
      double xm = 1.0;  // x^m / m!
      for (int m = 0; m < 10000; ++m) {
        const double term = xm / (theta - 1.0 - n + m * (theta - 1.0));
        sum += term;
        if (m > x && term < 1e-17 * sum) break;
        xm *= x / (m + 1);
      }
      return lead * sum;
    };
  }
  return decay;
}

}  // namespace

std::string_view to_string(MomentProvenance p) {
  switch (p) {
    case MomentProvenance::ClosedFormG1: return "ClosedFormG1";
    case MomentProvenance::ClosedFormBeta: return "ClosedFormBeta";
    case MomentProvenance::RecurrenceAnalyticC: return "RecurrenceAnalyticC";
    case MomentProvenance::RecurrenceQuadratureC: return "RecurrenceQuadratureC";
    case MomentProvenance::ExponentialReference: return "ExponentialReference";
    case MomentProvenance::MonteCarlo: return "MonteCarlo";
  }
  return "?";
}

double log_binomial(int n, int p) {
  if (p < 0 || p > n) return kNegInf;
  if (n <= 60) {
    // Exact in double up to C(60, 30) ~ 1.2e17; multiplicative form keeps it integral.
    double c = 1.0;
    const int k = std::min(p, n - p);
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::log(std::round(c));
  }
  return log_factorial(n) - log_factorial(p) - log_factorial(n - p);
}

MomentSet closed_moments_g1(double lambda, double rho, int n_max) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho");
  require_order(n_max);
  MomentSet m;
  m.lambda = lambda;
  m.rho = rho;
  m.provenance = MomentProvenance::ClosedFormG1;
  const double log_weight = std::log(-std::expm1(-rho));
  for (int n = 1; n <= n_max; ++n)
    m.log_moments.push_back(LogValue::from_log(log_weight + log_factorial(n) + n * (rho - std::log(lambda))));
  return m;
}

MomentSet closed_moments_beta(double lambda, double rho, double beta, int n_max) {
  require_order(n_max);
  const auto dist = make_beta_family(lambda, rho, beta);  // validates the band
  const auto& law = std::get<law::BetaFamily>(dist.law());
  MomentSet m;
  m.lambda = lambda;
  m.rho = rho;
  m.provenance = MomentProvenance::ClosedFormBeta;
  const double a = lambda + law.beta;
  if (dist.degenerate()) {
    m.degenerate = true;
    m.log_moments.assign(static_cast<std::size_t>(n_max), LogValue::zero());
    m.warnings.push_back("beta = -lambda: busy period is identically zero");
    return m;
  }
  // w n! / theta^n with theta = e^{-rho} a
  const double log_w = std::log(a / lambda) + std::log(-std::expm1(-rho));
  const double log_theta = -rho + std::log(a);
  for (int n = 1; n <= n_max; ++n)
    m.log_moments.push_back(LogValue::from_log(log_w + log_factorial(n) - n * log_theta));
  return m;
}

CDerivatives c_derivatives_deterministic(double lambda, double alpha, int n_max) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  require_order(n_max);
  CDerivatives c;
  c.source = CDerivatives::Source::AnalyticDeterministic;
  // Forward recurrence loses ~log10(n!) digits for small lambda*alpha; extended precision absorbs it.
  const long double rho = static_cast<long double>(lambda) * alpha;
  const long double q = std::exp(-rho);
  long double d = -std::expm1(-rho);
  long double alpha_pow = 1.0L;
  c.d.push_back(static_cast<double>(d));
  for (int n = 1; n < n_max; ++n) {
    alpha_pow *= alpha;
    d = (static_cast<long double>(n) / lambda) * d - q * alpha_pow;
    c.d.push_back(static_cast<double>(d));
  }
  return c;
}

CDerivatives c_derivatives_quadrature(const QueueConfig& config, int n_max, const QuadratureSettings& settings) {
  require_order(n_max);
  const auto& dist = config.service();
  const double lambda = config.lambda();
  CDerivatives c;
  c.source = CDerivatives::Source::Quadrature;
  if (dist.degenerate()) {
    c.d.assign(static_cast<std::size_t>(n_max), 0.0);
    return c;
  }
  const double log_lambda = std::log(lambda);
  for (int n = 0; n < n_max; ++n) {
    auto f = [&dist, lambda, log_lambda, n](double t) {
      const double ls = dist.log_survival(t);
      if (ls == kNegInf) return 0.0;
      if (t == 0.0) return n == 0 ? std::exp(log_lambda + ls) : 0.0;
      return std::exp(n * std::log(t) - lambda * dist.integrated_tail(t) + log_lambda + ls);
    };
    QuadratureResult r;
    if (dist.tail().kind == SurvivalTail::Kind::Bounded) {
      r = integrate_finite(f, 0.0, dist.support_upper(), settings, dist.breakpoints());
    } else {
      try {
        // D_n feeds E[B^{n+1}].
        r = integrate_semi_infinite(f, 0.0, d_integrand_decay(config, n), settings, dist.breakpoints(), n + 1);
      } catch (const DivergenceError& e) {
        throw DivergenceError("D_" + std::to_string(n) + " diverges, so E[B^" + std::to_string(n + 1) +
                                  "] is infinite: " + e.what(),
                              n + 1);
      }
    }
    if (r.tail_divergent && !c.divergent_from) c.divergent_from = n;
    c.d.push_back(r.value);
    c.diagnostics.push_back(r);
  }
  return c;
}

MomentSet moments_recurrence(const CDerivatives& cderivs, double lambda, double rho, int n_max) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho");
  require_order(n_max);
  if (static_cast<int>(cderivs.d.size()) < n_max)
    throw ParameterDomainError("moments_recurrence: need D_0..D_{n_max-1}");
  MomentSet m;
  m.lambda = lambda;
  m.rho = rho;
  m.provenance = cderivs.source == CDerivatives::Source::AnalyticDeterministic
                     ? MomentProvenance::RecurrenceAnalyticC
                     : MomentProvenance::RecurrenceQuadratureC;
  if (cderivs.divergent_from) m.divergent_from = *cderivs.divergent_from + 1;

  std::vector<double> log_d;
  bool all_zero = true;
  for (int p = 0; p < n_max; ++p) {
    const double d = cderivs.d[static_cast<std::size_t>(p)];
    if (d < 0.0) throw Error("moments_recurrence: D_" + std::to_string(p) + " is negative");
    if (d > 0.0) all_zero = false;
    log_d.push_back(d > 0.0 ? std::log(d) : kNegInf);
  }
  if (all_zero) {
    m.degenerate = true;
    m.log_moments.assign(static_cast<std::size_t>(n_max), LogValue::zero());
    m.warnings.push_back("all D_n vanish: busy period is identically zero");
    return m;
  }

  const double log_lambda = std::log(lambda);
  std::vector<double> log_e(static_cast<std::size_t>(n_max) + 1, kNegInf);
  log_e[0] = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    double acc = std::log(static_cast<double>(n)) - log_lambda + log_d[static_cast<std::size_t>(n - 1)];
    for (int p = 1; p < n; ++p)
      acc = log_add_exp(acc, log_binomial(n, p) + log_e[static_cast<std::size_t>(n - p)] +
                                 log_d[static_cast<std::size_t>(p)]);
    log_e[static_cast<std::size_t>(n)] = rho + acc;
    m.log_moments.push_back(LogValue::from_log(log_e[static_cast<std::size_t>(n)]));
  }
  if (m.divergent_from && *m.divergent_from <= n_max)
    m.warnings.push_back("E[B^n] is infinite for n >= " + std::to_string(*m.divergent_from) +
                         "; values shown are truncated at the quadrature horizon");
  return m;
}

MomentSet exponential_reference_moments(double mu, int n_max) {
  require_positive(mu, "mu");
  require_order(n_max);
  MomentSet m;
  m.provenance = MomentProvenance::ExponentialReference;
  for (int n = 1; n <= n_max; ++n) m.log_moments.push_back(LogValue::from_log(log_factorial(n) + n * std::log(mu)));
  return m;
}

ShapeStats shape_stats(const MomentSet& moments, TailPolicy policy) {
  if (moments.n_max() < 4) throw ParameterDomainError("shape_stats needs E[B^1..B^4]");
  if (moments.degenerate) throw DegenerateDistributionError("busy period is degenerate (identically zero)");
  ShapeStats s;
  if (moments.is_divergent(4)) {
    if (policy == TailPolicy::ErrorIfDivergent)
      throw DivergenceError("shape statistics need E[B^4], which is infinite (divergent from order " +
                                std::to_string(*moments.divergent_from) + ")",
                            *moments.divergent_from);
    s.from_truncated = true;
  }
  const double log_mean = moments.moment(1).log_abs();
  double r[5];
  for (int n = 1; n <= 4; ++n) {
    const auto& m = moments.moment(n);
    if (m.sign() <= 0 || !m.is_finite()) throw Error("shape_stats: moment " + std::to_string(n) + " is not positive");
    r[n] = std::exp(m.log_abs() - n * log_mean);
  }
  const double var = r[2] - 1.0;
  if (!(var > 64.0 * std::numeric_limits<double>::epsilon() * r[2]))
    throw DegenerateDistributionError("variance vanishes within rounding; shape statistics undefined");
  const double m3 = r[3] - 3.0 * r[2] + 2.0;
  const double m4 = r[4] - 4.0 * r[3] + 6.0 * r[2] - 3.0;
  s.delta1 = std::sqrt(var);
  s.delta2 = m3 * m3 / (var * var * var);
  s.delta3 = m4 / (var * var);
  return s;
}

MomentSet busy_moments(const QueueConfig& config, int n_max, const QuadratureSettings& settings,
                       MomentEngine engine) {
  const auto& dist = config.service();
  const double lambda = config.lambda();
  const double rho = config.rho();
  const bool beta_matches = [&] {
    const auto* b = std::get_if<law::BetaFamily>(&dist.law());
    return b && std::fabs(b->lambda - lambda) <= 1e-14 * lambda;
  }();
  if (engine == MomentEngine::ClosedForm && !beta_matches)
    throw ParameterDomainError("closed-form moments need a beta-family law with matching lambda");
  if (engine == MomentEngine::AnalyticC && dist.kind() != DistributionKind::Deterministic)
    throw ParameterDomainError("analytic D_n are only available for deterministic service");

  if ((engine == MomentEngine::Auto || engine == MomentEngine::ClosedForm) && beta_matches) {
    const auto& b = std::get<law::BetaFamily>(dist.law());
    if (b.beta == 0.0) return closed_moments_g1(lambda, b.rho, n_max);
    return closed_moments_beta(lambda, b.rho, b.beta, n_max);
  }
  if ((engine == MomentEngine::Auto || engine == MomentEngine::AnalyticC) &&
      dist.kind() == DistributionKind::Deterministic)
    return moments_recurrence(c_derivatives_deterministic(lambda, dist.mean(), n_max), lambda, rho, n_max);
  auto m = moments_recurrence(c_derivatives_quadrature(config, n_max, settings), lambda, rho, n_max);
  return m;
}

}  // namespace busyq
