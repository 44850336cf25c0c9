#include <algorithm>
#include <cmath>

#include "busyq/errors.hpp"
#include "busyq/transforms.hpp"
#include "doctest.h"

using namespace busyq;

TEST_CASE("LST limits and the mean") {
  const QueueConfig c(1.0, make_exponential(1.0));
  CHECK(lst_busy_period(c, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  const double s = 1e-6;
  CHECK(std::fabs(lst_busy_period_complement(c, s) / s / std::expm1(1.0) - 1.0) < 1e-4);
  for (double sv : {0.1, 1.0, 10.0}) {
    const double v = lst_busy_period(c, sv);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(lst_busy_period(c, 0.0), ParameterDomainError);
}

TEST_CASE("LST of the G1 mixture") {
  const QueueConfig c(1.0, make_beta_family(1.0, 1.0, 0.0));
  const double w = -std::expm1(-1.0), theta = std::exp(-1.0);
  for (double s : {0.5, 1.0, 2.0}) CHECK(std::fabs(lst_busy_period(c, s) - ((1 - w) + w * theta / (s + theta))) < 1e-7);
}

TEST_CASE("LST for bounded and heavy-tailed service") {
  // mean identity holds for every law
  for (const auto& d : {make_deterministic(0.8), make_power(2.0), make_pareto_fixed_scale(4.0)}) {
    const QueueConfig c(1.2, d);
    const double s = 1e-6;
    CHECK(std::fabs(lst_busy_period_complement(c, s) / s / (std::expm1(c.rho()) / c.lambda()) - 1.0) < 1e-4);
  }
}

TEST_CASE("closed-form beta CDF") {
  CHECK(busy_cdf_beta(1.0, 1.0, 0.0, 0.0) == doctest::Approx(std::exp(-1.0)));
  const double ub = beta_upper_bound(1.0, 2.0);
  for (double t : {0.0, 1.0, 10.0}) {
    CHECK(busy_cdf_beta(1.0, 2.0, ub, t) == doctest::Approx(-std::expm1(-t / std::expm1(2.0))).epsilon(1e-12));
    CHECK(busy_cdf_beta(1.0, 2.0, -1.0, t) == 1.0);
  }
}

TEST_CASE("heavy-traffic form") {
  CHECK(busy_cdf_heavy_traffic(1.0, 10.0, 0.0) == doctest::Approx(4.54e-5).epsilon(1e-3));
  CHECK(busy_cdf_heavy_traffic(1.0, 10.0, std::exp(10.0)) == doctest::Approx(0.6321).epsilon(1e-4));
  CHECK(heavy_traffic_mean(2.0, 3.0) == doctest::Approx(std::exp(3.0) / 2.0));
  // mixture mean (1 - e^-rho) e^rho / lambda equals the exact mean
  CHECK(-std::expm1(-3.0) * heavy_traffic_mean(2.0, 3.0) == doctest::Approx(std::expm1(3.0) / 2.0));
}

TEST_CASE("series against the G1 closed form") {
  SeriesSettings s;
  s.t_max = 10.0;
  const QueueConfig c(1.0, make_beta_family(1.0, 1.0, 0.0));
  auto closed = [](double t) { return busy_cdf_beta(1.0, 1.0, 0.0, t); };
  const auto r = busy_cdf_series(c, s);
  CHECK_FALSE(r.renewal);
  CHECK(r.terms > 10);
  CHECK(r.truncation_bound < 1e-8);
  CHECK(sup_distance(r.cdf, closed, 0.0, 10.0) <= 5e-4);
  s.method = SeriesMethod::Renewal;
  const auto q = busy_cdf_series(c, s);
  CHECK(q.renewal);
  CHECK(sup_distance(q.cdf, closed, 0.0, 10.0) <= 5e-4);
  double diff = 0.0;
  for (std::size_t i = 0; i < q.cdf.size(); ++i) diff = std::max(diff, std::fabs(q.cdf.values[i] - r.cdf.values[i]));
  CHECK(diff < 1e-8);
}

TEST_CASE("deterministic service: no busy period shorter than one service") {
  const auto r = busy_cdf_series(QueueConfig(1.0, make_deterministic(1.0)));
  for (std::size_t i = 0; i < r.cdf.size() && r.cdf.t(i) < 0.999; ++i) CHECK(r.cdf.values[i] < 1e-5);
  CHECK(r.cdf.at(1.01) > 0.3);
}

TEST_CASE("grid LST matches direct evaluation") {
  const QueueConfig c(1.0, make_exponential(1.0));
  const auto r = busy_cdf_series(c);
  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) CHECK(std::fabs(r.cdf.laplace_stieltjes(s) - lst_busy_period(c, s)) < 1e-4);
}

TEST_CASE("grid refinement converges") {
  const QueueConfig c(1.0, make_exponential(1.0));
  auto run = [&](double dt) {
    SeriesSettings s;
    s.dt = dt;
    s.t_max = 20.0;
    return busy_cdf_series(c, s).cdf;
  };
  const auto a = run(0.02), b = run(0.01), d = run(0.005);
  auto gap = [](const GridFunction& coarse, const GridFunction& fine) {
    return sup_distance(coarse, [&](double t) { return fine.at(t); });
  };
  const double first = gap(a, b), second = gap(b, d);
  CHECK(second < first);
  CHECK(second < 4.0 * first);
}

TEST_CASE("heavy-traffic distance is bounded below by the no-arrival probability") {
  // P(B <= t) >= P(first service ends before the next arrival and before t); with
  // exponential service this tends to 1 / (1 + rho) at t ~ a few alpha, far below e^rho / lambda.
  for (double rho : {1.0, 2.0, 5.0, 10.0}) {
    SeriesSettings s;
    s.dt = rho >= 5.0 ? 0.25 : 0.01;
    s.t_max = 5.0 * std::exp(rho);
    const auto r = busy_cdf_series(QueueConfig(1.0, make_exponential(rho)), s);
    const double dist = sup_distance(r.cdf, [&](double t) { return busy_cdf_heavy_traffic(1.0, rho, t); });
    CAPTURE(rho);
    CHECK(dist >= 1.0 / (1.0 + rho) - 2.0 * std::exp(-rho) - 0.01);
  }
}

TEST_CASE("grid limits") {
  SeriesSettings s;
  s.dt = 1e-6;
  s.t_max = 100.0;
  CHECK_THROWS_AS(busy_cdf_series(QueueConfig(1.0, make_exponential(1.0)), s), ParameterDomainError);
  const auto g = busy_cdf_series(QueueConfig(1.0, make_beta_family(1.0, 1.0, -1.0)));
  CHECK(g.cdf.values.front() == 1.0);
  SeriesSettings huge;
  huge.dt = 1.0;
  huge.t_max = 10.0;
  const auto h = busy_cdf_series(QueueConfig(1.0, make_exponential(800.0)), huge);
  CHECK(h.heavy_traffic_fallback);
  CHECK_FALSE(h.warnings.empty());
}

TEST_CASE("monotone projection barely moves a fine grid") {
  SeriesSettings s;
  s.t_max = 20.0;
  const auto r = busy_cdf_series(QueueConfig(1.0, make_beta_family(1.0, 1.0, 0.0)), s);
  CHECK(r.projection_adjustment < 1e-5);
  CHECK(r.warnings.empty());
  const auto d = busy_cdf_series(QueueConfig(1.0, make_deterministic(1.0)), s);
  CHECK(d.projection_adjustment < 1e-5);
}
