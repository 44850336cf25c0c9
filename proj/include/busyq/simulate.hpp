#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "busyq/distributions.hpp"
#include "busyq/transforms.hpp"

namespace busyq {

struct SimulationPlan {
  QueueConfig config;
  std::uint64_t n_busy_periods = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t max_events_per_period = 10'000'000;
  /// Extent of the empirical CDF grid; empty = largest observed period.
  std::optional<double> cdf_t_max;
  std::size_t cdf_points = 1001;
};

struct SampleSummary {
  std::uint64_t count = 0;
  /// Sample raw moments m_1..m_4 (index 0 holds m_1).
  std::array<double, 4> moments{};
  /// sqrt(Var(B^k) / count); NaN where the order is flagged infinite.
  std::array<double, 4> standard_errors{};
  /// E[B^k] is infinite for this service law (Pareto tail with k >= theta).
  std::array<bool, 4> infinite_moment{};
};

struct SimulationReport {
  SampleSummary summary;
  GridFunction empirical_cdf;
  std::uint64_t truncated_periods = 0;
  /// Completed busy-period lengths in ascending order.
  std::vector<double> sorted_samples;
  std::vector<std::string> warnings;
};

/// Event-driven sampling of busy periods; bit-identical for a fixed plan.
SimulationReport sample_busy_periods(const SimulationPlan& plan);

/// sup_t |F_n(t) - F(t)| for sorted samples against a CDF that may have atoms
/// (`cdf_left` gives F(t-)).
double ks_distance(const std::vector<double>& sorted_samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left);

/// Asymptotic one-sample KS critical value at level 0.01.
double ks_critical_value_1pct(std::size_t n);

/// Shape statistics from sample raw moments.
struct SampleShape {
  double delta1, delta2, delta3;
};
SampleShape sample_shape(const SampleSummary& summary);

}  // namespace busyq
