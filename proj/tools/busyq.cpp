// busyq: busy-period statistics of the M|G|inf queue from the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "busyq/dist_spec.hpp"
#include "busyq/errors.hpp"
#include "busyq/moments.hpp"
#include "busyq/render.hpp"
#include "busyq/simulate.hpp"
#include "busyq/tables.hpp"
#include "busyq/transforms.hpp"
#include "json.hpp"

namespace {

using namespace busyq;

constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitGoldenMismatch = 3;

struct UsageError : Error {
  using Error::Error;
};

struct GlobalOptions {
  std::string format = "markdown";
  std::optional<double> rel_tol, abs_tol, horizon;
  std::string tail_policy = "error";
  std::uint64_t seed = 1;
};

struct QueueOptions {
  std::string dist;
  std::optional<double> lambda, rho;
};

QuadratureSettings quadrature_settings(const GlobalOptions& g) {
  QuadratureSettings q;
  if (g.rel_tol) q.rel_tol = *g.rel_tol;
  if (g.abs_tol) q.abs_tol = *g.abs_tol;
  q.truncation_horizon = g.horizon;
  q.tail_policy = g.tail_policy == "truncate" ? TailPolicy::TruncateAndWarn : TailPolicy::ErrorIfDivergent;
  return q;
}

QueueConfig make_queue(const QueueOptions& o) {
  auto dist = parse_distribution(o.dist);
  if (o.lambda && o.rho) throw UsageError("give --lambda or --rho, not both");
  double lambda = 1.0;
  if (o.lambda)
    lambda = *o.lambda;
  else if (o.rho)
    lambda = *o.rho / dist.mean();
  else if (const auto* b = std::get_if<law::BetaFamily>(&dist.law()))
    lambda = b->lambda;
  return QueueConfig(lambda, std::move(dist));
}

RenderContext context_for(const QueueConfig& c) { return {c.service().describe(), c.lambda(), c.rho(), {}}; }

void add_queue_options(CLI::App* cmd, QueueOptions& o) {
  cmd->add_option("--dist", o.dist, "service law, e.g. det:alpha=1, exp:alpha=2, beta:lambda=1,rho=1,beta=0")
      ->required();
  cmd->add_option("--lambda", o.lambda, "arrival rate (default 1, or the beta law's lambda)");
  cmd->add_option("--rho", o.rho, "traffic intensity; sets lambda = rho / mean service time");
}

MomentEngine parse_engine(const std::string& s) {
  if (s == "auto") return MomentEngine::Auto;
  if (s == "closed") return MomentEngine::ClosedForm;
  if (s == "analytic") return MomentEngine::AnalyticC;
  return MomentEngine::Quadrature;
}

MomentSet compute_moments(const QueueConfig& c, int n, bool reference, const std::string& engine,
                          const GlobalOptions& g) {
  if (reference) {
    auto m = exponential_reference_moments(std::expm1(c.rho()) / c.lambda(), n);
    m.lambda = c.lambda();
    m.rho = c.rho();
    return m;
  }
  return busy_moments(c, n, quadrature_settings(g), parse_engine(engine));
}

int run(int argc, char** argv) {
  CLI::App app{"Busy-period statistics of the M|G|inf queue"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "markdown", "md"}))
      ->capture_default_str();
  app.add_option("--rel-tol", g.rel_tol, "quadrature relative tolerance");
  app.add_option("--abs-tol", g.abs_tol, "quadrature absolute tolerance");
  app.add_option("--horizon", g.horizon, "fixed truncation horizon for semi-infinite integrals");
  app.add_option("--tail-policy", g.tail_policy, "divergent integrals: error or truncate")
      ->check(CLI::IsMember({"error", "truncate"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "simulation seed")->capture_default_str();

  // moments
  QueueOptions mq;
  int n_moments = 4;
  bool m_reference = false;
  std::string m_engine = "auto";
  auto* moments = app.add_subcommand("moments", "raw busy-period moments E[B^n]");
  add_queue_options(moments, mq);
  moments->add_option("--n", n_moments, "highest order")->check(CLI::Range(1, 200))->capture_default_str();
  moments->add_flag("--reference", m_reference, "exponential law with the same mean instead");
  moments->add_option("--engine", m_engine, "auto, closed, analytic or quadrature")
      ->check(CLI::IsMember({"auto", "closed", "analytic", "quadrature"}))
      ->capture_default_str();

  // shape
  QueueOptions sq;
  bool s_reference = false;
  std::string s_engine = "auto";
  auto* shape = app.add_subcommand("shape", "coefficients delta1 (cv), delta2 (symmetry), delta3 (kurtosis)");
  add_queue_options(shape, sq);
  shape->add_flag("--reference", s_reference, "exponential law with the same mean instead");
  shape->add_option("--engine", s_engine, "auto, closed, analytic or quadrature")
      ->check(CLI::IsMember({"auto", "closed", "analytic", "quadrature"}))
      ->capture_default_str();

  // cdf
  QueueOptions cq;
  std::string c_method = "series";
  std::optional<double> c_dt, c_tmax;
  std::optional<int> c_terms;
  std::vector<double> c_at;
  std::string c_series = "auto";
  auto* cdf = app.add_subcommand("cdf", "busy-period distribution function B(t)");
  add_queue_options(cdf, cq);
  cdf->add_option("--method", c_method, "series, beta-closed or heavy-traffic")
      ->check(CLI::IsMember({"series", "beta-closed", "heavy-traffic"}))
      ->capture_default_str();
  cdf->add_option("--dt", c_dt, "grid step");
  cdf->add_option("--t-max", c_tmax, "grid extent");
  cdf->add_option("--terms", c_terms, "number of series terms (default: from the tail bound)")
      ->check(CLI::PositiveNumber);
  cdf->add_option("--series-solver", c_series, "auto, explicit or renewal")
      ->check(CLI::IsMember({"auto", "explicit", "renewal"}))
      ->capture_default_str();
  cdf->add_option("--t", c_at, "report B only at these times");

  // lst
  QueueOptions lq;
  double l_s = 1.0;
  auto* lst = app.add_subcommand("lst", "Laplace-Stieltjes transform E[exp(-sB)]");
  add_queue_options(lst, lq);
  lst->add_option("--s", l_s, "transform argument")->required()->check(CLI::PositiveNumber);

  // simulate
  QueueOptions simq;
  std::uint64_t periods = 100'000;
  std::uint64_t max_events = 10'000'000;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo busy periods");
  add_queue_options(simulate, simq);
  simulate->add_option("--periods", periods, "number of busy periods")->capture_default_str();
  simulate->add_option("--max-events", max_events, "arrival cap per busy period")->capture_default_str();

  // table
  std::string table_id;
  double tol_closed = 1e-6, tol_quad = 5e-4, tol_pareto = 1e-3;
  auto* table = app.add_subcommand("table", "recompute a printed table and compare");
  table->add_option("id", table_id, "T3.1 T4.1 T5.1 T6.1 T7.1 T7.2 T8.1 ... T8.6, or all")->required();
  table->add_option("--tol-closed", tol_closed, "relative tolerance, closed-form cells")->capture_default_str();
  table->add_option("--tol-quadrature", tol_quad, "relative tolerance, quadrature cells")->capture_default_str();
  table->add_option("--tol-pareto", tol_pareto, "relative tolerance, Pareto rows")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const Format format = parse_format(g.format);

  if (*moments) {
    const auto c = make_queue(mq);
    std::cout << render_moments(compute_moments(c, n_moments, m_reference, m_engine, g), context_for(c), format);
    return 0;
  }
  if (*shape) {
    const auto c = make_queue(sq);
    const auto m = compute_moments(c, 4, s_reference, s_engine, g);
    auto ctx = context_for(c);
    ctx.notes = m.warnings;
    if (s_reference) ctx.notes.push_back("exponential law with mean (e^rho - 1) / lambda");
    std::cout << render_shape(shape_stats(m, quadrature_settings(g).tail_policy), ctx, format);
    return 0;
  }
  if (*cdf) {
    const auto c = make_queue(cq);
    auto ctx = context_for(c);
    const double lambda = c.lambda(), rho = c.rho();
    const auto* beta = std::get_if<law::BetaFamily>(&c.service().law());
    if (c_method == "beta-closed" && !beta) throw UsageError("--method beta-closed needs a beta: distribution");
    std::function<double(double)> closed;
    if (beta) closed = [=](double t) { return busy_cdf_beta(beta->lambda, beta->rho, beta->beta, t); };

    GridFunction grid;
    if (c_method == "series") {
      SeriesSettings s;
      s.dt = c_dt;
      s.t_max = c_tmax;
      if (!c_tmax && !c_at.empty()) s.t_max = *std::max_element(c_at.begin(), c_at.end());
      s.n_terms = c_terms;
      s.method = c_series == "explicit"  ? SeriesMethod::ExplicitTerms
                 : c_series == "renewal" ? SeriesMethod::Renewal
                                         : SeriesMethod::Auto;
      auto r = busy_cdf_series(c, s);
      grid = std::move(r.cdf);
      ctx.notes = r.warnings;
      if (r.renewal) {
        ctx.notes.push_back("series summed exactly through its renewal equation");
      } else {
        char buf[96];
        std::snprintf(buf, sizeof buf, "series terms: %d, truncation bound %.3g", r.terms, r.truncation_bound);
        ctx.notes.push_back(buf);
      }
      if (closed) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "max |series - closed form| on the grid: %.3g", sup_distance(grid, closed));
        ctx.notes.push_back(buf);
      }
    } else {
      const double t_max = c_tmax.value_or(10.0 * std::exp(std::min(rho, 700.0)) / lambda);
      const double dt = c_dt.value_or(t_max / 1000.0);
      if (c_method == "beta-closed")
        grid = tabulate_cdf(closed, dt, t_max);
      else
        grid = tabulate_cdf([=](double t) { return busy_cdf_heavy_traffic(lambda, rho, t); }, dt, t_max);
      ctx.notes.push_back(c_method == "beta-closed" ? "closed form for the constant-beta family"
                                                    : "heavy-traffic exponential approximation");
    }
    if (!c_at.empty()) {
      GridFunction points;
      // Irregular times: emit them as a one-point-per-row table.
      for (double t : c_at) {
        if (t < 0.0) throw UsageError("--t values must be >= 0");
        double v = grid.at(t);
        if (c_method == "beta-closed") v = closed(t);
        if (c_method == "heavy-traffic") v = busy_cdf_heavy_traffic(lambda, rho, t);
        points.values.push_back(v);
      }
      if (format == Format::Json) {
        nlohmann::json j = {{"distribution", ctx.distribution}, {"lambda", lambda}, {"rho", rho},
                            {"notes", ctx.notes}, {"t", c_at}, {"B", points.values}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "t,B\n";
        for (std::size_t i = 0; i < c_at.size(); ++i) std::printf("%.12g,%.12g\n", c_at[i], points.values[i]);
      }
      return 0;
    }
    std::cout << render_grid(grid, ctx, format);
    return 0;
  }
  if (*lst) {
    const auto c = make_queue(lq);
    const auto q = quadrature_settings(g);
    const double comp = lst_busy_period_complement(c, l_s, q);
    std::cout << render_lst(l_s, 1.0 - comp, comp, context_for(c), format);
    return 0;
  }
  if (*simulate) {
    const auto c = make_queue(simq);
    const SimulationPlan plan{c, periods, g.seed, max_events, std::nullopt};
    const auto r = sample_busy_periods(plan);
    auto ctx = context_for(c);
    const double target = std::expm1(c.rho()) / c.lambda();
    char buf[128];
    std::snprintf(buf, sizeof buf, "E[B] = (e^rho - 1)/lambda = %.8g; sample mean is %.2f standard errors away", target,
                  (r.summary.moments[0] - target) / r.summary.standard_errors[0]);
    ctx.notes.push_back(buf);
    std::cout << render_simulation(r, ctx, format);
    return 0;
  }
  if (*table) {
    TableOptions opt;
    opt.tolerances = {tol_closed, tol_quad, tol_pareto};
    opt.quadrature = quadrature_settings(g);
    std::vector<TableId> ids;
    if (table_id == "all")
      ids = all_tables();
    else
      ids.push_back(parse_table_id(table_id));
    bool ok = true;
    for (TableId id : ids) {
      const auto r = run_table(id, opt);
      std::cout << render_table(r, format);
      ok = ok && r.all_gating_passed();
    }
    return ok ? 0 : kExitGoldenMismatch;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}
