#include "busyq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "busyq/errors.hpp"

namespace busyq {
namespace {

// Fixed so that results do not depend on the host's thread count.
constexpr std::uint64_t kChunks = 16;

struct ChunkResult {
  std::vector<double> samples;
  std::uint64_t truncated = 0;
};

ChunkResult run_chunk(const SimulationPlan& plan, std::uint64_t chunk, std::uint64_t periods) {
  std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                    static_cast<std::uint32_t>(chunk)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> interarrival(plan.config.lambda());
  const auto& service = plan.config.service();

  ChunkResult out;
  out.samples.reserve(periods);
  for (std::uint64_t k = 0; k < periods; ++k) {
    // The system empties at the latest pending departure, so only that time matters.
    double last_departure = service.quantile(unif(rng));
    double now = 0.0;
    std::uint64_t events = 1;
    bool truncated = false;
    for (;;) {
      now += interarrival(rng);
      if (now > last_departure) break;
      last_departure = std::max(last_departure, now + service.quantile(unif(rng)));
      if (++events >= plan.max_events_per_period) {
        truncated = true;
        break;
      }
    }
    if (truncated)
      ++out.truncated;
    else
      out.samples.push_back(last_departure);
  }
  return out;
}

}  // namespace

SimulationReport sample_busy_periods(const SimulationPlan& plan) {
  if (plan.n_busy_periods < 1) throw ParameterDomainError("n_busy_periods must be >= 1");
  if (plan.max_events_per_period < 1) throw ParameterDomainError("max_events_per_period must be >= 1");
  if (plan.cdf_points < 2) throw ParameterDomainError("cdf_points must be >= 2");

  std::vector<std::future<ChunkResult>> jobs;
  for (std::uint64_t c = 0; c < kChunks; ++c) {
    const std::uint64_t periods = plan.n_busy_periods / kChunks + (c < plan.n_busy_periods % kChunks ? 1 : 0);
    jobs.push_back(std::async(std::launch::async, run_chunk, std::cref(plan), c, periods));
  }
  SimulationReport report;
  std::vector<double> samples;
  samples.reserve(plan.n_busy_periods);
  for (auto& job : jobs) {
    auto chunk = job.get();
    report.truncated_periods += chunk.truncated;
    samples.insert(samples.end(), chunk.samples.begin(), chunk.samples.end());
  }
  if (report.truncated_periods > 0)
    report.warnings.push_back(std::to_string(report.truncated_periods) +
                              " periods hit the event cap and are excluded from the estimates");

  auto& s = report.summary;
  s.count = samples.size();
  const SurvivalTail tail = plan.config.service().tail();
  for (int k = 1; k <= 4; ++k)
    s.infinite_moment[k - 1] = tail.kind == SurvivalTail::Kind::Power && k >= tail.parameter;
  if (s.count == 0) {
    s.moments.fill(std::numeric_limits<double>::quiet_NaN());
    s.standard_errors.fill(std::numeric_limits<double>::quiet_NaN());
    report.warnings.push_back("no completed busy periods");
  } else {
    std::array<double, 8> sums{};
    for (double b : samples) {
      double pw = 1.0;
      for (double& acc : sums) acc += (pw *= b);
    }
    const double n = static_cast<double>(s.count);
    for (int k = 0; k < 4; ++k) {
      s.moments[k] = sums[k] / n;
      if (s.infinite_moment[k] || s.count < 2) {
        s.standard_errors[k] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double var = std::max(0.0, (sums[2 * k + 1] / n - s.moments[k] * s.moments[k]) * n / (n - 1.0));
      s.standard_errors[k] = std::sqrt(var / n);
    }
    for (int k = 0; k < 4; ++k)
      if (s.infinite_moment[k])
        report.warnings.push_back("E[B^" + std::to_string(k + 1) +
                                  "] is infinite for this service law; the sample value has no standard error");
  }

  std::sort(samples.begin(), samples.end());
  const double t_max = plan.cdf_t_max.value_or(samples.empty() ? 1.0 : std::max(samples.back(), 1e-12));
  auto& cdf = report.empirical_cdf;
  cdf.kind = GridFunction::Kind::CDF;
  cdf.dt = t_max / static_cast<double>(plan.cdf_points - 1);
  cdf.values.resize(plan.cdf_points);
  for (std::size_t i = 0; i < plan.cdf_points; ++i) {
    const auto below = std::upper_bound(samples.begin(), samples.end(), cdf.t(i)) - samples.begin();
    cdf.values[i] = samples.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(samples.size());
  }
  report.sorted_samples = std::move(samples);
  return report;
}

double ks_distance(const std::vector<double>& sorted_samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted_samples.size()) {
    const double x = sorted_samples[i];
    std::size_t j = i;
    while (j < sorted_samples.size() && sorted_samples[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - cdf_left(x)));
    d = std::max(d, std::fabs(static_cast<double>(j) / n - cdf(x)));
    i = j;
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) {
  // sqrt(-ln(0.005) / 2)
  return 1.6276236 / std::sqrt(static_cast<double>(n));
}

SampleShape sample_shape(const SampleSummary& s) {
  const double m = s.moments[0];
  const double r2 = s.moments[1] / (m * m);
  const double r3 = s.moments[2] / (m * m * m);
  const double r4 = s.moments[3] / (m * m * m * m);
  const double var = r2 - 1.0;
  const double m3 = r3 - 3.0 * r2 + 2.0;
  const double m4 = r4 - 4.0 * r3 + 6.0 * r2 - 3.0;
  return {std::sqrt(var), m3 * m3 / (var * var * var), m4 / (var * var)};
}

}  // namespace busyq
