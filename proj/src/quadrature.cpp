#include "busyq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "busyq/errors.hpp"

namespace busyq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (descending) and weights, Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw Error("integrand is not finite at t = " + std::to_string(x));
  return y;
}

// QUADPACK qk15 with its error heuristic.
Panel gauss_kronrod_15(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, centre);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, centre - dx);
    f2[j] = checked(f, centre + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

  const double width = std::fabs(half);
  resabs *= width;
  resasc *= width;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, resk * half, err};
}

std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double decay_exponent(const DecayClass& decay) {
  if (const auto* p = std::get_if<PowerTail>(&decay)) return p->exponent;
  if (const auto* p = std::get_if<PlateauTimesPowerTail>(&decay)) return p->exponent;
  return -kInf;
}

double find_horizon(const DecayClass& decay, double start, const QuadratureSettings& s, bool& capped) {
  const double target = s.abs_tol;
  capped = false;
  double hi = std::max(start, 1.0);
  if (tail_bound(decay, hi) < target) return hi;
  double lo = hi;
  while (tail_bound(decay, hi) >= target) {
    if (hi >= s.horizon_cap) {
      capped = true;
      return s.horizon_cap;
    }
    lo = hi;
    hi = std::min(2.0 * hi, s.horizon_cap);
  }
  // Smallest horizon meeting the target, to ~1e-3 relative.
  for (int i = 0; i < 40 && hi / lo > 1.001; ++i) {
    const double mid = std::sqrt(lo * hi);
    (tail_bound(decay, mid) < target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

bool is_divergent(const DecayClass& decay) { return decay_exponent(decay) >= -1.0; }

double tail_bound(const DecayClass& decay, double horizon) {
  if (const auto* e = std::get_if<ExponentialTail>(&decay)) {
    if (!(e->rate > 0.0)) return kInf;
    const double x = e->rate * horizon;
    if (e->degree < 0.0) return e->scale * std::pow(horizon, e->degree) * std::exp(-x) / e->rate;
    // scale * Gamma(d + 1, r T) / r^(d + 1), assembled in log space
    const double a = e->degree + 1.0;
    const double q = boost::math::gamma_q(a, x);
    if (q == 0.0) return 0.0;
    return e->scale * std::exp(std::log(q) + boost::math::lgamma(a) - a * std::log(e->rate));
  }
  const double p = decay_exponent(decay);
  if (p >= -1.0) return kInf;
  double scale = 1.0;
  if (const auto* pw = std::get_if<PowerTail>(&decay)) scale = pw->scale;
  if (const auto* pl = std::get_if<PlateauTimesPowerTail>(&decay)) scale = pl->plateau(horizon);
  return scale * std::pow(horizon, p + 1.0) / (-(p + 1.0));
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b, const QuadratureSettings& s,
                                  std::span<const double> breakpoints) {
  if (!(a <= b)) throw ParameterDomainError("integrate_finite: need a <= b");
  if (!(s.rel_tol > 0.0 && s.abs_tol > 0.0)) throw ParameterDomainError("tolerances must be > 0");
  QuadratureResult r;
  r.horizon = b;
  if (a == b) return r;

  std::priority_queue<Panel> active;
  std::vector<Panel> settled;  // panels too narrow to bisect further
  double total = 0.0;
  double total_err = 0.0;
  const auto edges = panel_edges(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Panel p = gauss_kronrod_15(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    active.push(p);
  }
  int panels = static_cast<int>(active.size());

  auto converged = [&] { return total_err <= std::max(s.abs_tol, s.rel_tol * std::fabs(total)); };
  auto resum = [&] {
    total = 0.0;
    total_err = 0.0;
    auto copy = active;
    while (!copy.empty()) {
      total += copy.top().value;
      total_err += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) {
      total += p.value;
      total_err += p.error;
    }
  };

  while (!converged() || (resum(), !converged())) {
    if (active.empty()) break;
    if (panels >= s.max_subdivisions) {
      resum();
      throw AccuracyError("quadrature: subdivision budget of " + std::to_string(s.max_subdivisions) +
                              " exhausted (estimate " + std::to_string(total) + ", error " +
                              std::to_string(total_err) + ")",
                          total, total_err);
    }
    const Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a < 64.0 * kEps * std::max(std::fabs(worst.a), std::fabs(worst.b))) {
      settled.push_back(worst);
      continue;
    }
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++panels;
  }
  r.value = total;
  r.est_error = total_err;
  r.subdivisions_used = panels;
  return r;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a, const DecayClass& decay,
                                         const QuadratureSettings& s, std::span<const double> breakpoints,
                                         int order) {
  const bool divergent = is_divergent(decay);
  if (divergent && s.tail_policy == TailPolicy::ErrorIfDivergent) {
    throw DivergenceError("integral diverges: integrand tail ~ t^" + std::to_string(decay_exponent(decay)) +
                              (order > 0 ? " (moment order " + std::to_string(order) + ")" : std::string()),
                          order);
  }

  const auto* exact_tail = std::get_if<PlateauTimesPowerTail>(&decay);
  if (exact_tail && !exact_tail->tail_integral) exact_tail = nullptr;

  double horizon = 0.0;
  bool capped = false;
  if (s.truncation_horizon) {
    horizon = *s.truncation_horizon;
    if (!(horizon > a)) throw ParameterDomainError("truncation horizon must exceed the lower limit");
  } else if (divergent) {
    horizon = s.horizon_cap;
  } else {
    double start = a;
    for (double x : breakpoints) start = std::max(start, x);
    if (exact_tail)
      horizon = std::max({2.0 * start, a + 1.0, exact_tail->tail_from});
    else
      horizon = find_horizon(decay, std::max(2.0 * start, a + 1.0), s, capped);
  }

  // Decade breakpoints help the bisection across long power-law ranges.
  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  double base = a > 0.0 ? a : 1.0;
  for (double x : breakpoints)
    if (x > 0.0) base = std::min(base, x);
  for (double x = 10.0 * base; x < horizon; x *= 10.0) points.push_back(x);

  QuadratureResult r = integrate_finite(f, a, horizon, s, points);
  r.horizon = horizon;
  r.tail_divergent = divergent;
  r.truncated_tail_bound = divergent ? kInf : tail_bound(decay, horizon);
  r.horizon_capped = capped;
  if (!divergent && exact_tail && horizon >= exact_tail->tail_from) {
    r.value += exact_tail->tail_integral(horizon);
    r.truncated_tail_bound = 0.0;
  }
  return r;
}

}  // namespace busyq
