#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "busyq/dist_spec.hpp"
#include "busyq/distributions.hpp"
#include "busyq/errors.hpp"
#include "busyq/quadrature.hpp"
#include "doctest.h"

using namespace busyq;

namespace {

std::vector<ServiceDistribution> catalog() {
  return {make_deterministic(1.5),
          make_exponential(0.7),
          make_power(3.0),
          make_pareto_fixed_shape(2.0 / 3.0),
          make_pareto_fixed_scale(5.0 / 3.0),
          make_beta_family(1.0, 1.0, 0.0),
          make_beta_family(2.0, 0.5, -1.0),
          make_beta_family(1.0, 2.0, beta_upper_bound(1.0, 2.0)),
          make_tabulated({0.0, 0.5, 2.0}, {0.0, 0.4, 1.0}, "inline")};
}

// Numeric mean: integral of the survival function.
double numeric_mean(const ServiceDistribution& d) {
  QuadratureSettings s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-15;
  auto surv = [&d](double t) { return d.survival(t); };
  if (std::isfinite(d.support_upper())) return integrate_finite(surv, 0.0, d.support_upper(), s, d.breakpoints()).value;
  const auto tail = d.tail();
  DecayClass decay = tail.kind == SurvivalTail::Kind::Exponential
                         ? DecayClass(ExponentialTail{tail.parameter, 0.0, tail.scale})
                         : DecayClass(PowerTail{-tail.parameter, tail.scale});
  s.horizon_cap = 1e9;
  return integrate_semi_infinite(surv, 0.0, decay, s, d.breakpoints()).value;
}

}  // namespace

TEST_CASE("numeric mean agrees with the declared mean") {
  for (const auto& d : catalog()) {
    CAPTURE(d.describe());
    const bool heavy = d.tail().kind == SurvivalTail::Kind::Power;
    CHECK(std::fabs(numeric_mean(d) / d.mean() - 1.0) < (heavy ? 1e-6 : 1e-8));
  }
}

TEST_CASE("CDF is a distribution function with the declared atom") {
  for (const auto& d : catalog()) {
    CAPTURE(d.describe());
    CHECK(d.cdf(0.0) == doctest::Approx(d.atom_at_zero()).epsilon(1e-14));
    double prev = 0.0;
    for (double t = 0.0; t < 20.0; t += 0.01) {
      const double g = d.cdf(t);
      CHECK(g >= prev - 1e-15);
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
      prev = g;
    }
    if (std::isfinite(d.support_upper())) {
      CHECK(d.cdf(d.support_upper()) == 1.0);
      CHECK(d.cdf(d.support_upper() * 1.5) == 1.0);
    }
    CHECK(d.mean() > 0.0);
    CHECK(d.support_upper() > 0.0);
  }
}

TEST_CASE("integrated and residual tails are consistent") {
  for (const auto& d : catalog()) {
    CAPTURE(d.describe());
    for (double t : {0.0, 0.3, 1.0, 1.7, 4.0, 25.0}) {
      CHECK(d.integrated_tail(t) + d.residual_tail(t) == doctest::Approx(d.mean()).epsilon(1e-12));
      QuadratureSettings s;
      s.rel_tol = 1e-12;
      if (t > 0.0) {
        const double direct = integrate_finite([&d](double v) { return d.survival(v); }, 0.0, t, s, d.breakpoints()).value;
        CHECK(d.integrated_tail(t) == doctest::Approx(direct).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("quantile inverts the CDF") {
  for (const auto& d : catalog()) {
    CAPTURE(d.describe());
    for (double u : {0.0, 0.05, 0.3, 0.5, 0.77, 0.999}) {
      const double t = d.quantile(u);
      CHECK(d.cdf(t) >= u - 1e-12);
      if (t > 1e-9) CHECK(d.cdf_left(t) <= u + 1e-9);
    }
  }
}

TEST_CASE("family parameterisations") {
  CHECK(make_power(4.0).mean() == doctest::Approx(0.8));
  CHECK(make_pareto_fixed_shape(2.0).mean() == doctest::Approx(3.0));
  CHECK(make_pareto_fixed_scale(5.0).mean() == doctest::Approx(0.5));
  CHECK(make_beta_family(1.0, 1.0, 0.0).atom_at_zero() == doctest::Approx(std::exp(-1.0)));
  CHECK(make_beta_family(3.0, 2.0, 0.2).mean() == doctest::Approx(2.0 / 3.0));
  CHECK(QueueConfig(2.0, make_exponential(1.5)).rho() == doctest::Approx(3.0));
}

TEST_CASE("beta family endpoints") {
  const auto lower = make_beta_family(1.0, 1.0, -1.0);
  CHECK(lower.degenerate());
  CHECK(lower.cdf(0.0) == 1.0);
  const auto upper = make_beta_family(1.0, 1.0, beta_upper_bound(1.0, 1.0));
  CHECK(upper.atom_at_zero() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_beta_family(1.0, 1.0, 1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_beta_family(1.0, 1.0, -1.5), ParameterDomainError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(make_deterministic(0.0), ParameterDomainError);
  CHECK_THROWS_AS(make_exponential(-1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_pareto_fixed_scale(1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_tabulated({0.0, 1.0}, {0.0, 0.5}, "x"), ParameterDomainError);
  CHECK_THROWS_AS(QueueConfig(0.0, make_exponential(1.0)), ParameterDomainError);
}

TEST_CASE("distribution spec strings") {
  CHECK(parse_distribution("det:alpha=2").mean() == 2.0);
  CHECK(parse_distribution("exp:alpha=0.5").kind() == DistributionKind::Exponential);
  CHECK(parse_distribution("pow:alpha=0.8").mean() == doctest::Approx(0.8));
  CHECK(parse_distribution("pareto3:alpha=1.5").mean() == doctest::Approx(1.5));
  CHECK(parse_distribution("paretok:alpha=1").mean() == doctest::Approx(1.0));
  CHECK(parse_distribution(" beta : lambda=1, rho=2, beta=0 ").mean() == doctest::Approx(2.0));

  auto message = [](const char* spec) {
    try {
      parse_distribution(spec);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("exp:alpah=1").find("alpah") != std::string::npos);
  CHECK(message("exp:alpha=x").find("alpha") != std::string::npos);
  CHECK(message("det:alpha=1,alpha=2").find("duplicate") != std::string::npos);
  CHECK(message("beta:lambda=1,rho=1").find("beta") != std::string::npos);
  CHECK(message("gamma:alpha=1").find("gamma") != std::string::npos);
  CHECK(message("exp").find("kind:key=value") != std::string::npos);
}

TEST_CASE("tabulated CSV") {
  const std::string path = "test_distributions_table.csv";
  {
    std::ofstream out(path);
    out << "t,G\n# uniform on [0, 2]\n0,0\n1,0.5\n2,1\n";
  }
  const auto d = parse_distribution("table:path=" + path);
  CHECK(d.mean() == doctest::Approx(1.0));
  CHECK(d.cdf(0.5) == doctest::Approx(0.25));
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_distribution("table:path=/nonexistent.csv"), ParseError);
}
