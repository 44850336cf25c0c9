#include "busyq/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "busyq/errors.hpp"

namespace busyq {
namespace {

constexpr int kMaxExplicitTerms = 400;
constexpr double kExplicitWorkLimit = 3e8;
constexpr double kKernelCutoff = 1e-17;

void require_positive(double x, const char* name) {
  if (!(x > 0.0 && std::isfinite(x))) throw ParameterDomainError(std::string(name) + " must be > 0");
}

// Trapezoid on [0, t_i] of kernel * f, kernel truncated to k_len nodes.
double trapezoid_convolution(const std::vector<double>& kernel, std::size_t k_len, const std::vector<double>& f,
                             std::size_t i, double dt) {
  if (i == 0) return 0.0;
  double acc = 0.5 * kernel[0] * f[i];
  if (i < k_len) acc += 0.5 * kernel[i] * f[0];
  const std::size_t upper = std::min(i - 1, k_len - 1);
  for (std::size_t j = 1; j <= upper; ++j) acc += kernel[j] * f[i - j];
  return dt * acc;
}

GridFunction constant_cdf(double value, double dt, std::size_t n) {
  GridFunction g;
  g.dt = dt;
  g.values.assign(n, value);
  return g;
}

}  // namespace

double GridFunction::at(double t) const {
  if (values.empty()) throw ParameterDomainError("empty grid");
  const double x = (t - t0) / dt;
  if (x <= 0.0) return values.front();
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= values.size()) return values.back();
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double GridFunction::laplace_stieltjes(double s) const {
  require_positive(s, "s");
  if (kind != Kind::CDF) throw ParameterDomainError("laplace_stieltjes needs a CDF grid");
  if (values.empty()) throw ParameterDomainError("empty grid");
  double acc = values.front() * std::exp(-s * t0);
  const double edge = -std::expm1(-s * dt) / s;  // int_0^dt e^{-su} du
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double slope = (values[i + 1] - values[i]) / dt;
    acc += slope * std::exp(-s * t(i)) * edge;
  }
  acc += (1.0 - values.back()) * std::exp(-s * t_max());
  return acc;
}

double sup_distance(const GridFunction& g, const std::function<double(double)>& f, double from, double to) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.t(i);
    if (t < from || t > to) continue;
    worst = std::max(worst, std::fabs(g.values[i] - f(t)));
  }
  return worst;
}

GridFunction tabulate_cdf(const std::function<double(double)>& f, double dt, double t_max) {
  require_positive(dt, "dt");
  if (!(t_max >= 0.0)) throw ParameterDomainError("t_max must be >= 0");
  GridFunction g;
  g.dt = dt;
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
  g.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.values.push_back(f(g.t(i)));
  return g;
}

double lst_busy_period_complement(const QueueConfig& config, double s, const QuadratureSettings& settings) {
  require_positive(s, "s");
  const auto& dist = config.service();
  if (dist.degenerate()) return 0.0;
  const double lambda = config.lambda();
  const double rho = config.rho();
  // I(s) = e^{-rho} (1/s + J), J = int e^{-st} expm1(lambda R(t)) dt with R the residual tail.
  auto g = [&dist, lambda, s](double t) { return std::exp(-s * t) * std::expm1(lambda * dist.residual_tail(t)); };
  QuadratureResult r;
  if (std::isfinite(dist.support_upper()))
    r = integrate_finite(g, 0.0, dist.support_upper(), settings, dist.breakpoints());
  else
    r = integrate_semi_infinite(g, 0.0, ExponentialTail{s, 0.0, std::expm1(rho)}, settings, dist.breakpoints());
  const double sj = s * r.value;
  // 1/I - s = s (e^rho - 1 - sJ) / (1 + sJ)
  return s * (std::expm1(rho) - sj) / (lambda * (1.0 + sj));
}

double lst_busy_period(const QueueConfig& config, double s, const QuadratureSettings& settings) {
  return 1.0 - lst_busy_period_complement(config, s, settings);
}

int auto_series_terms(double lambda, double rho, double h_max, double tail_budget) {
  const double p = -std::expm1(-rho);
  const double log_scale = std::log(h_max) - std::log(lambda) + rho;  // h_max / (lambda e^{-rho})
  const double log_p = std::log(p);
  // h_max p^{N+1} / (lambda e^{-rho}) < budget
  const double n = (std::log(tail_budget) - log_scale) / log_p - 1.0;
  if (!std::isfinite(n)) return 1;
  return std::max(1, static_cast<int>(std::floor(n)) + 1);
}

SeriesResult busy_cdf_series(const QueueConfig& config, const SeriesSettings& settings) {
  const auto& dist = config.service();
  const double lambda = config.lambda();
  const double rho = config.rho();
  SeriesResult out;

  const double dt = settings.dt.value_or(std::min(dist.mean(), 1.0 / lambda) / 200.0);
  require_positive(dt, "dt");
  const double extent = std::isfinite(dist.support_upper()) ? dist.support_upper() : 10.0 * dist.mean();
  double t_max = settings.t_max.value_or(std::exp(std::min(rho, 700.0)) * std::log(1e8) / lambda + extent);
  require_positive(t_max, "t_max");
  if (t_max / dt + 1.0 > static_cast<double>(settings.max_points))
    throw ParameterDomainError("grid of " + std::to_string(static_cast<long long>(t_max / dt) + 1) +
                               " points exceeds the limit of " + std::to_string(settings.max_points) +
                               "; raise dt or lower t_max");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;

  if (dist.degenerate()) {
    out.cdf = constant_cdf(1.0, dt, n);
    out.warnings.push_back("degenerate service: busy period is identically zero");
    return out;
  }
  const double q = std::exp(-rho);
  if (q < 1e-300) {
    out.heavy_traffic_fallback = true;
    out.cdf = tabulate_cdf([&](double t) { return busy_cdf_heavy_traffic(lambda, rho, t); }, dt, t_max);
    out.warnings.push_back("e^{-rho} underflows; heavy-traffic approximation used instead of the series");
    return out;
  }
  const double p = -std::expm1(-rho);

  // h(t) = e^{-lambda I_G(t)} lambda (1 - G(t)) / p; interior jumps of G take the mid value.
  std::vector<double> h(n);
  double h_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double surv = dist.survival(t);
    if (i > 0) surv = 0.5 * (surv + 1.0 - dist.cdf_left(t));
    h[i] = std::exp(-lambda * dist.integrated_tail(t)) * lambda * surv / p;
    h_max = std::max(h_max, h[i]);
  }
  // Rescale to the exact mass on [0, t_max] so the discrete series keeps its weights.
  double trap = 0.0;
  for (std::size_t i = 1; i < n; ++i) trap += 0.5 * (h[i - 1] + h[i]) * dt;
  const double mass = -std::expm1(-lambda * dist.integrated_tail(t_max)) / p;
  if (trap > 0.0) {
    const double scale = mass / trap;
    for (double& v : h) v *= scale;
    h_max *= scale;
  }
  std::size_t k_len = n;
  while (k_len > 1 && h[k_len - 1] < kKernelCutoff * h_max) --k_len;

  const int auto_terms = auto_series_terms(lambda, rho, h_max, settings.tail_budget);
  bool use_renewal = false;
  int terms = 0;
  switch (settings.method) {
    case SeriesMethod::Renewal: use_renewal = true; break;
    case SeriesMethod::ExplicitTerms:
      terms = settings.n_terms.value_or(std::min(auto_terms, kMaxExplicitTerms));
      if (!settings.n_terms && auto_terms > kMaxExplicitTerms)
        out.warnings.push_back("auto term count " + std::to_string(auto_terms) + " capped at " +
                               std::to_string(kMaxExplicitTerms));
      break;
    case SeriesMethod::Auto:
      if (settings.n_terms) {
        terms = *settings.n_terms;
      } else {
        const double work = static_cast<double>(auto_terms) * static_cast<double>(n) * static_cast<double>(k_len);
        use_renewal = auto_terms > kMaxExplicitTerms || work > kExplicitWorkLimit;
        terms = auto_terms;
      }
      break;
  }
  if (!use_renewal && terms < 1) throw ParameterDomainError("n_terms must be >= 1");

  std::vector<double> u(n, 0.0);
  if (use_renewal) {
    // u = p h + p h * u, trapezoid with the implicit end term.
    out.renewal = true;
    const double denom = 1.0 - 0.5 * p * dt * h[0];
    u[0] = p * h[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double conv = trapezoid_convolution(h, k_len, u, i, dt);  // u[i] is still zero here
      u[i] = p * ((i < k_len ? h[i] : 0.0) + conv) / denom;
    }
  } else {
    out.terms = terms;
    std::vector<double> power = h;
    for (std::size_t i = 0; i < k_len; ++i) u[i] = p * h[i];
    std::vector<double> next(n);
    double weight = p;
    for (int k = 2; k <= terms; ++k) {
      weight *= p;
      for (std::size_t i = 0; i < n; ++i) next[i] = trapezoid_convolution(h, k_len, power, i, dt);
      power.swap(next);
      for (std::size_t i = 0; i < n; ++i) u[i] += weight * power[i];
    }
    out.truncation_bound = h_max * std::pow(p, terms + 1) / (lambda * q);
  }

  // The exact B is a CDF, so a running max clamped to [0, 1] cannot increase the sup error.
  out.cdf.dt = dt;
  out.cdf.values.resize(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = 1.0 - u[i] / lambda;
    running = std::clamp(std::max(running, raw), 0.0, 1.0);
    out.cdf.values[i] = running;
    out.projection_adjustment = std::max(out.projection_adjustment, std::fabs(running - raw));
  }
  if (out.projection_adjustment > 1e-6) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "discretization produced a non-monotone CDF; projection moved values by up to %.3g",
                  out.projection_adjustment);
    out.warnings.push_back(buf);
  }
  return out;
}

double busy_cdf_beta(double lambda, double rho, double beta, double t) {
  if (!(t >= 0.0)) throw ParameterDomainError("t must be >= 0");
  const auto dist = make_beta_family(lambda, rho, beta);  // validates the band
  if (dist.degenerate()) return 1.0;
  const double a = lambda + beta;
  const double w = (a / lambda) * -std::expm1(-rho);
  return 1.0 - w * std::exp(-std::exp(-rho) * a * t);
}

double busy_cdf_heavy_traffic(double lambda, double rho, double t) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho");
  if (!(t >= 0.0)) throw ParameterDomainError("t must be >= 0");
  return 1.0 + std::expm1(-rho) * std::exp(-lambda * std::exp(-rho) * t);
}

double heavy_traffic_mean(double lambda, double rho) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho");
  return std::exp(rho) / lambda;
}

}  // namespace busyq
