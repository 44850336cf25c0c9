#pragma once

#include <string>
#include <vector>

#include "busyq/distributions.hpp"

// One queue per catalog family at traffic intensity rho. lambda = 1 except for
// the power law, whose mean c/(c+1) < 1 forces lambda = rho / alpha (alpha = .5).
struct LatticePoint {
  std::string family;
  busyq::QueueConfig config;
};

inline std::vector<LatticePoint> catalog_at(double rho) {
  using namespace busyq;
  return {
      {"det", QueueConfig(1.0, make_deterministic(rho))},
      {"exp", QueueConfig(1.0, make_exponential(rho))},
      {"pow", QueueConfig(2.0 * rho, make_power(1.0))},
      {"pareto3", QueueConfig(1.0, make_pareto_fixed_shape(rho / 1.5))},
      {"paretok", QueueConfig(1.0, make_pareto_fixed_scale(rho / (rho - 0.4)))},
      {"beta0", QueueConfig(1.0, make_beta_family(1.0, rho, 0.0))},
      {"beta_upper", QueueConfig(1.0, make_beta_family(1.0, rho, beta_upper_bound(1.0, rho)))},
      {"tabulated", QueueConfig(1.0, make_tabulated({0.0, 0.5 * rho, 2.0 * rho}, {0.0, 0.25, 1.0}, "lattice"))},
  };
}

inline const std::vector<double>& lattice_rhos() {
  static const std::vector<double> rhos = {0.5, 1.0, 2.0, 5.0, 10.0};
  return rhos;
}
