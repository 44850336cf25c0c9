#include "busyq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "busyq/errors.hpp"
#include "busyq/log_value.hpp"

namespace busyq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw ParameterDomainError("time argument must be >= 0, got " + std::to_string(t));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Beta family helpers. With a = lambda + beta, p = 1 - e^{-rho}, q = e^{-rho}:
//   e^{-lambda I(t)} = q + p e^{-a t}
//   1 - G(t)         = (a/lambda) p e^{-a t} / (q + p e^{-a t})
double beta_rate(const law::BetaFamily& b) { return b.lambda + b.beta; }

double beta_log_kernel(const law::BetaFamily& b, double t) {
  // log(q + p e^{-a t})
  return log_add_exp(-b.rho, std::log(-std::expm1(-b.rho)) - beta_rate(b) * t);
}

// ---- per-law evaluation --------------------------------------------------

double pareto_log_survival(const law::Pareto& p, double t) {
  if (t < p.k) return 0.0;
  return p.theta * (std::log(p.k) - std::log(t));
}

double tabulated_cdf(const law::Tabulated& tab, double t) {
  const auto& ts = *tab.t;
  const auto& gs = *tab.g;
  if (t >= ts.back()) return 1.0;
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return gs[i] + w * (gs[i + 1] - gs[i]);
}

double tabulated_integrated_tail(const law::Tabulated& tab, double t) {
  const auto& ts = *tab.t;
  const auto& cum = *tab.cumulative_tail;
  if (t >= ts.back()) return cum.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double s0 = 1.0 - (*tab.g)[i];
  const double s1 = 1.0 - tabulated_cdf(tab, t);
  return cum[i] + 0.5 * (s0 + s1) * (t - ts[i]);
}

}  // namespace

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Deterministic: return "Deterministic";
    case DistributionKind::Exponential: return "Exponential";
    case DistributionKind::Power: return "Power";
    case DistributionKind::ParetoFixedShape: return "ParetoFixedShape";
    case DistributionKind::ParetoFixedScale: return "ParetoFixedScale";
    case DistributionKind::BetaFamily: return "BetaFamily";
    case DistributionKind::UserTabulated: return "UserTabulated";
  }
  return "?";
}

double ServiceDistribution::cdf(double t) const { return 1.0 - survival(t); }

double ServiceDistribution::cdf_left(double t) const {
  require_nonnegative_time(t);
  if (t == 0.0) return 0.0;
  if (const auto* d = std::get_if<law::Deterministic>(&law_)) return t <= d->alpha ? 0.0 : 1.0;
  return cdf(t);
}

double ServiceDistribution::survival(double t) const {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{
          [&](const law::Deterministic& d) { return t < d.alpha ? 1.0 : 0.0; },
          [&](const law::Exponential& e) { return std::exp(-t / e.alpha); },
          [&](const law::Power& p) { return t < 1.0 ? 1.0 - std::pow(t, p.c) : 0.0; },
          [&](const law::Pareto& p) { return std::exp(pareto_log_survival(p, t)); },
          [&](const law::BetaFamily&) {
            if (degenerate_) return 0.0;
            return std::exp(log_survival(t));
          },
          [&](const law::Tabulated& tab) { return 1.0 - tabulated_cdf(tab, t); },
      },
      law_);
}

double ServiceDistribution::log_survival(double t) const {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{
          [&](const law::Exponential& e) { return -t / e.alpha; },
          [&](const law::Pareto& p) { return pareto_log_survival(p, t); },
          [&](const law::BetaFamily& b) {
            if (degenerate_) return -kInf;
            const double a = beta_rate(b);
            return std::log(a / b.lambda) + std::log(-std::expm1(-b.rho)) - a * t -
                   beta_log_kernel(b, t);
          },
          [&](const auto&) {
            const double s = survival(t);
            return s > 0.0 ? std::log(s) : -kInf;
          },
      },
      law_);
}

double ServiceDistribution::integrated_tail(double t) const {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{
          [&](const law::Deterministic& d) { return std::min(t, d.alpha); },
          [&](const law::Exponential& e) { return -e.alpha * std::expm1(-t / e.alpha); },
          [&](const law::Power& p) {
            if (t >= 1.0) return mean_;
            return t - std::pow(t, p.c + 1.0) / (p.c + 1.0);
          },
          [&](const law::Pareto& p) {
            if (t < p.k) return t;
            return mean_ - residual_tail(t);
          },
          [&](const law::BetaFamily& b) {
            if (degenerate_) return 0.0;
            return -beta_log_kernel(b, t) / b.lambda;
          },
          [&](const law::Tabulated& tab) { return tabulated_integrated_tail(tab, t); },
      },
      law_);
}

double ServiceDistribution::residual_tail(double t) const {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{
          [&](const law::Deterministic& d) { return std::max(d.alpha - t, 0.0); },
          [&](const law::Exponential& e) { return e.alpha * std::exp(-t / e.alpha); },
          [&](const law::Power& p) {
            if (t >= 1.0) return 0.0;
            return mean_ - t + std::pow(t, p.c + 1.0) / (p.c + 1.0);
          },
          [&](const law::Pareto& p) {
            if (t < p.k) return mean_ - t;
            // k^theta t^{1-theta} / (theta - 1)
            return p.k * std::exp((p.theta - 1.0) * (std::log(p.k) - std::log(t))) /
                   (p.theta - 1.0);
          },
          [&](const law::BetaFamily& b) {
            if (degenerate_) return 0.0;
            // (1/lambda) log1p((e^rho - 1) e^{-a t})
            const double x = std::log(std::expm1(b.rho)) - beta_rate(b) * t;
            const double softplus = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
            return softplus / b.lambda;
          },
          [&](const law::Tabulated& tab) { return mean_ - tabulated_integrated_tail(tab, t); },
      },
      law_);
}

double ServiceDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw ParameterDomainError("quantile level must lie in [0, 1)");
  return std::visit(
      Overloaded{
          [&](const law::Deterministic& d) { return d.alpha; },
          [&](const law::Exponential& e) { return -e.alpha * std::log1p(-u); },
          [&](const law::Power& p) { return std::pow(u, 1.0 / p.c); },
          [&](const law::Pareto& p) { return p.k * std::exp(-std::log1p(-u) / p.theta); },
          [&](const law::BetaFamily& b) {
            if (u <= atom_at_zero_) return 0.0;
            // Solve (1-atom) y / (q + p y) = s for y = e^{-a t}.
            const double s = 1.0 - u;
            const double w = 1.0 - atom_at_zero_;
            const double p = -std::expm1(-b.rho);
            return (std::log(w - s * p) - std::log(s) + b.rho) / beta_rate(b);
          },
          [&](const law::Tabulated& tab) {
            const auto& ts = *tab.t;
            const auto& gs = *tab.g;
            if (u <= gs.front()) return 0.0;
            const auto it = std::lower_bound(gs.begin(), gs.end(), u);
            const auto j = static_cast<std::size_t>(it - gs.begin());
            const double w = (u - gs[j - 1]) / (gs[j] - gs[j - 1]);
            return ts[j - 1] + w * (ts[j] - ts[j - 1]);
          },
      },
      law_);
}

std::string ServiceDistribution::describe() const {
  return std::visit(
      Overloaded{
          [&](const law::Deterministic& d) { return "det:alpha=" + fmt(d.alpha); },
          [&](const law::Exponential& e) { return "exp:alpha=" + fmt(e.alpha); },
          [&](const law::Power& p) { return "pow:c=" + fmt(p.c); },
          [&](const law::Pareto& p) {
            return kind_ == DistributionKind::ParetoFixedShape ? "pareto3:k=" + fmt(p.k)
                                                               : "paretok:theta=" + fmt(p.theta);
          },
          [&](const law::BetaFamily& b) {
            return "beta:lambda=" + fmt(b.lambda) + ",rho=" + fmt(b.rho) + ",beta=" + fmt(b.beta);
          },
          [&](const law::Tabulated& tab) { return "table:path=" + tab.source; },
      },
      law_);
}

// ---- factories ------------------------------------------------------------

ServiceDistribution make_deterministic(double alpha) {
  if (!(alpha > 0.0 && std::isfinite(alpha)))
    throw ParameterDomainError("deterministic service: alpha must be > 0");
  ServiceDistribution d(DistributionKind::Deterministic, law::Deterministic{alpha});
  d.mean_ = alpha;
  d.support_upper_ = alpha;
  d.breakpoints_ = {alpha};
  d.tail_ = {SurvivalTail::Kind::Bounded, alpha};
  return d;
}

ServiceDistribution make_exponential(double alpha) {
  if (!(alpha > 0.0 && std::isfinite(alpha)))
    throw ParameterDomainError("exponential service: alpha must be > 0");
  ServiceDistribution d(DistributionKind::Exponential, law::Exponential{alpha});
  d.mean_ = alpha;
  d.support_upper_ = kInf;
  d.tail_ = {SurvivalTail::Kind::Exponential, 1.0 / alpha, 1.0, 0.0};
  return d;
}

ServiceDistribution make_power(double c) {
  if (!(c > 0.0 && std::isfinite(c))) throw ParameterDomainError("power service: c must be > 0");
  ServiceDistribution d(DistributionKind::Power, law::Power{c});
  d.mean_ = c / (c + 1.0);
  d.support_upper_ = 1.0;
  d.breakpoints_ = {1.0};
  d.tail_ = {SurvivalTail::Kind::Bounded, 1.0};
  return d;
}

ServiceDistribution make_pareto_fixed_shape(double k) {
  if (!(k > 0.0 && std::isfinite(k))) throw ParameterDomainError("pareto3 service: k must be > 0");
  ServiceDistribution d(DistributionKind::ParetoFixedShape, law::Pareto{k, 3.0});
  d.mean_ = 1.5 * k;
  d.support_upper_ = kInf;
  d.breakpoints_ = {k};
  d.tail_ = {SurvivalTail::Kind::Power, 3.0, k * k * k, k};
  return d;
}

ServiceDistribution make_pareto_fixed_scale(double theta) {
  if (!(theta > 1.0 && std::isfinite(theta)))
    throw ParameterDomainError("paretok service: theta must be > 1 (finite mean)");
  constexpr double k = 0.4;
  ServiceDistribution d(DistributionKind::ParetoFixedScale, law::Pareto{k, theta});
  d.mean_ = k * theta / (theta - 1.0);
  d.support_upper_ = kInf;
  d.breakpoints_ = {k};
  d.tail_ = {SurvivalTail::Kind::Power, theta, std::pow(k, theta), k};
  return d;
}

double beta_upper_bound(double lambda, double rho) { return lambda / std::expm1(rho); }

ServiceDistribution make_beta_family(double lambda, double rho, double beta) {
  if (!(lambda > 0.0 && std::isfinite(lambda)))
    throw ParameterDomainError("beta family: lambda must be > 0");
  if (!(rho > 0.0 && std::isfinite(rho))) throw ParameterDomainError("beta family: rho must be > 0");
  const double upper = beta_upper_bound(lambda, rho);
  // Endpoints are admissible; allow rounding slack at the upper one.
  if (!(beta >= -lambda && beta <= upper * (1.0 + 1e-12)))
    throw ParameterDomainError("beta family: beta must lie in [-lambda, lambda/(e^rho - 1)] = [" +
                               fmt(-lambda) + ", " + fmt(upper) + "], got " + fmt(beta));
  beta = std::min(beta, upper);
  ServiceDistribution d(DistributionKind::BetaFamily, law::BetaFamily{lambda, rho, beta});
  const double a = lambda + beta;
  const double p = -std::expm1(-rho);
  d.mean_ = rho / lambda;
  d.atom_at_zero_ = std::clamp(1.0 - a * p / lambda, 0.0, 1.0);
  if (a <= 0.0) {
    d.degenerate_ = true;
    d.atom_at_zero_ = 1.0;
    d.support_upper_ = 0.0;
    d.tail_ = {SurvivalTail::Kind::Bounded, 0.0};
  } else {
    d.support_upper_ = kInf;
    // 1 - G(t) <= (a/lambda) p e^{rho} e^{-a t}
    d.tail_ = {SurvivalTail::Kind::Exponential, a, (a / lambda) * std::expm1(rho), 0.0};
  }
  return d;
}

ServiceDistribution make_tabulated(std::vector<double> t, std::vector<double> g, std::string source) {
  if (t.size() != g.size() || t.size() < 2)
    throw ParameterDomainError("tabulated service: need at least two (t, G) points");
  if (t.front() != 0.0) throw ParameterDomainError("tabulated service: grid must start at t = 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(g[i] >= 0.0 && g[i] <= 1.0))
      throw ParameterDomainError("tabulated service: G must lie in [0, 1] (row " + std::to_string(i) + ")");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ParameterDomainError("tabulated service: t must be strictly increasing (row " + std::to_string(i) + ")");
    if (i > 0 && g[i] < g[i - 1])
      throw ParameterDomainError("tabulated service: G must be nondecreasing (row " + std::to_string(i) + ")");
  }
  if (std::fabs(g.back() - 1.0) > 1e-12)
    throw ParameterDomainError("tabulated service: last G value must be 1 (finite support)");
  g.back() = 1.0;
  if (g.front() >= 1.0) throw ParameterDomainError("tabulated service: mean must be > 0");

  std::vector<double> cum(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    cum[i] = cum[i - 1] + 0.5 * ((1.0 - g[i - 1]) + (1.0 - g[i])) * (t[i] - t[i - 1]);

  law::Tabulated tab{std::make_shared<const std::vector<double>>(t),
                     std::make_shared<const std::vector<double>>(g),
                     std::make_shared<const std::vector<double>>(cum), std::move(source)};
  ServiceDistribution d(DistributionKind::UserTabulated, tab);
  d.mean_ = cum.back();
  d.support_upper_ = t.back();
  d.atom_at_zero_ = g.front();
  d.breakpoints_.assign(t.begin() + 1, t.end());
  d.tail_ = {SurvivalTail::Kind::Bounded, t.back()};
  return d;
}

QueueConfig::QueueConfig(double lambda, ServiceDistribution service)
    : lambda_(lambda), service_(std::move(service)) {
  if (!(lambda > 0.0 && std::isfinite(lambda)))
    throw ParameterDomainError("arrival rate lambda must be > 0");
}

}  // namespace busyq
