#include "busyq/tables.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <future>
#include <map>

#include "busyq/distributions.hpp"
#include "busyq/errors.hpp"
#include "busyq/moments.hpp"

namespace busyq {
namespace {

struct GoldenRow {
  const char* table;
  double key;
  std::vector<double> cells;
};

const std::vector<GoldenRow>& golden_rows() {
  static const std::vector<GoldenRow> rows = {
#define GOLDEN_ROW(table, key, ...) {table, key, {__VA_ARGS__}},
#include "golden_data.inc"
#undef GOLDEN_ROW
  };
  return rows;
}

struct Erratum {
  TableId id;
  double key;
  std::size_t column;
  std::optional<double> corrected;
};

const std::vector<Erratum>& errata() {
  static const std::vector<Erratum> list = {
      {TableId::T5_1, 50, 2, 9.0050089},
      {TableId::T6_1, 0.5, 1, std::nullopt},
      {TableId::T6_1, 6, 5, 8.9996459},
      {TableId::T8_1, 5, 0, 575.21254},
      {TableId::T8_3, 2, 1, 9.6984581e8},
      {TableId::T8_3, 2, 3, 9.7024229e8},
      {TableId::T8_5, 5, 3, 4.4957455e110},
      {TableId::T8_6, 6, 0, 2.7165746e263},
      {TableId::T8_6, 6, 1, 2.7165746e263},
      {TableId::T8_6, 7, 0, std::nullopt},
      {TableId::T8_6, 7, 1, std::nullopt},
      {TableId::T8_6, 7, 2, std::nullopt},
      {TableId::T8_6, 7, 3, std::nullopt},
  };
  return list;
}

const Erratum* find_erratum(TableId id, double key, std::size_t column) {
  for (const auto& e : errata())
    if (e.id == id && e.key == key && e.column == column) return &e;
  return nullptr;
}

struct CellOutcome {
  std::optional<LogValue> value;
  std::string diagnostic;
};

using RowOutcome = std::vector<CellOutcome>;

struct RowWork {
  RowOutcome cells;
  std::vector<std::string> warnings;
};

bool is_moment_table(TableId id) { return id >= TableId::T8_1; }

double moment_table_rho(TableId id) {
  switch (id) {
    case TableId::T8_1: return 0.5;
    case TableId::T8_2: return 1.0;
    case TableId::T8_3: return 10.0;
    case TableId::T8_4: return 20.0;
    case TableId::T8_5: return 50.0;
    case TableId::T8_6: return 100.0;
    default: throw Error("not a moment table");
  }
}

std::vector<std::string> columns_of(TableId id) {
  switch (id) {
    case TableId::T3_1:
    case TableId::T4_1:
    case TableId::T5_1: return {"delta1", "delta2", "delta3"};
    case TableId::T6_1:
      return {"alpha=.25 delta2", "alpha=.25 delta3", "alpha=.5 delta2", "alpha=.5 delta3", "alpha=.8 delta2",
              "alpha=.8 delta3"};
    case TableId::T7_1:
    case TableId::T7_2: return {"delta2", "delta3"};
    default: return {"M|G1|inf", "M|D|inf", "M|M|inf", "Exponential"};
  }
}

std::string title_of(TableId id) {
  switch (id) {
    case TableId::T3_1: return "M|G1|inf shape coefficients, lambda = 1";
    case TableId::T4_1: return "M|D|inf shape coefficients, lambda = 1";
    case TableId::T5_1: return "M|M|inf shape coefficients, lambda = 1";
    case TableId::T6_1: return "M|P|inf shape coefficients, G(t) = t^c on [0,1), lambda = rho / alpha";
    case TableId::T7_1: return "M|Pa|inf shape coefficients, theta = 3, k = 2 rho / 3, lambda = 1";
    case TableId::T7_2: return "M|Pa|inf shape coefficients, k = 0.4, theta = rho / (rho - 0.4), lambda = 1";
    default: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "E[B^n], rho = %g, lambda = 1", moment_table_rho(id));
      return buf;
    }
  }
}

std::string row_key_text(double key) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", key);
  return buf;
}

void append_warnings(std::vector<std::string>& out, const std::string& prefix, const std::vector<std::string>& in) {
  for (const auto& w : in) out.push_back(prefix + w);
}

void fill_shape(RowOutcome& row, std::size_t offset, const ShapeStats& s, bool with_delta1) {
  std::size_t c = offset;
  if (with_delta1) row[c++].value = LogValue::from_double(s.delta1);
  row[c++].value = LogValue::from_double(s.delta2);
  row[c].value = LogValue::from_double(s.delta3);
}

RowWork compute_shape_row(TableId id, double rho, const TableOptions& options) {
  RowWork work;
  work.cells.resize(columns_of(id).size());
  const std::string prefix = "rho=" + row_key_text(rho) + ": ";
  auto fail_all = [&](std::size_t from, std::size_t to, const std::string& why) {
    for (std::size_t c = from; c < to; ++c) work.cells[c].diagnostic = why;
  };
  switch (id) {
    case TableId::T3_1:
    case TableId::T4_1:
    case TableId::T5_1: {
      try {
        MomentSet m;
        if (id == TableId::T3_1)
          m = closed_moments_g1(1.0, rho, 4);
        else if (id == TableId::T4_1)
          m = busy_moments(QueueConfig(1.0, make_deterministic(rho)), 4, options.quadrature, MomentEngine::AnalyticC);
        else
          m = busy_moments(QueueConfig(1.0, make_exponential(rho)), 4, options.quadrature, MomentEngine::Quadrature);
        fill_shape(work.cells, 0, shape_stats(m), true);
      } catch (const std::exception& e) {
        fail_all(0, 3, e.what());
      }
      break;
    }
    case TableId::T6_1: {
      const double alphas[] = {0.25, 0.5, 0.8};
      for (std::size_t a = 0; a < 3; ++a) {
        try {
          const double alpha = alphas[a];
          const QueueConfig config(rho / alpha, make_power(alpha / (1.0 - alpha)));
          auto m = busy_moments(config, 4, options.quadrature, MomentEngine::Quadrature);
          fill_shape(work.cells, 2 * a, shape_stats(m), false);
        } catch (const std::exception& e) {
          fail_all(2 * a, 2 * a + 2, e.what());
        }
      }
      break;
    }
    case TableId::T7_1:
    case TableId::T7_2: {
      try {
        QuadratureSettings q = options.quadrature;
        q.tail_policy = TailPolicy::TruncateAndWarn;
        if (!q.truncation_horizon) q.horizon_cap = options.pareto_horizon_cap;
        const auto dist = id == TableId::T7_1 ? make_pareto_fixed_shape(rho / 1.5)
                                              : make_pareto_fixed_scale(rho / (rho - 0.4));
        auto m = busy_moments(QueueConfig(1.0, dist), 4, q, MomentEngine::Quadrature);
        append_warnings(work.warnings, prefix, m.warnings);
        fill_shape(work.cells, 0, shape_stats(m, TailPolicy::TruncateAndWarn), false);
      } catch (const std::exception& e) {
        fail_all(0, 2, e.what());
      }
      break;
    }
    default: throw Error("not a shape table");
  }
  return work;
}

// Moment tables run one engine per column.
RowWork compute_moment_column(TableId id, std::size_t column, const TableOptions& options) {
  const double rho = moment_table_rho(id);
  constexpr int kOrders = 8;
  RowWork work;
  work.cells.resize(kOrders);
  try {
    MomentSet m;
    switch (column) {
      case 0: m = closed_moments_g1(1.0, rho, kOrders); break;
      case 1: m = busy_moments(QueueConfig(1.0, make_deterministic(rho)), kOrders, options.quadrature,
                               MomentEngine::AnalyticC);
        break;
      case 2: m = busy_moments(QueueConfig(1.0, make_exponential(rho)), kOrders, options.quadrature,
                               MomentEngine::Quadrature);
        break;
      default: m = exponential_reference_moments(std::expm1(rho), kOrders); break;
    }
    for (int n = 1; n <= kOrders; ++n) work.cells[static_cast<std::size_t>(n - 1)].value = m.moment(n);
    append_warnings(work.warnings, columns_of(id)[column] + ": ", m.warnings);
  } catch (const std::exception& e) {
    for (auto& c : work.cells) c.diagnostic = e.what();
  }
  return work;
}

double tolerance_for(TableId id, std::size_t column, const Tolerances& tol) {
  switch (id) {
    case TableId::T3_1:
    case TableId::T4_1: return tol.closed_form;
    case TableId::T5_1:
    case TableId::T6_1: return tol.quadrature;
    case TableId::T7_1:
    case TableId::T7_2: return tol.pareto;
    default: return column == 2 ? tol.quadrature : tol.closed_form;
  }
}

}  // namespace

TableId parse_table_id(std::string_view text) {
  std::string s(text);
  if (!s.empty() && (s[0] == 'T' || s[0] == 't')) s.erase(0, 1);
  std::replace(s.begin(), s.end(), '_', '.');
  for (TableId id : all_tables())
    if (to_string(id).substr(1) == s) return id;
  throw ParseError("unknown table id '" + std::string(text) + "'");
}

std::string to_string(TableId id) {
  static const char* names[] = {"T3.1", "T4.1", "T5.1", "T6.1", "T7.1", "T7.2",
                                "T8.1", "T8.2", "T8.3", "T8.4", "T8.5", "T8.6"};
  return names[static_cast<int>(id)];
}

const std::vector<TableId>& all_tables() {
  static const std::vector<TableId> ids = {TableId::T3_1, TableId::T4_1, TableId::T5_1, TableId::T6_1,
                                           TableId::T7_1, TableId::T7_2, TableId::T8_1, TableId::T8_2,
                                           TableId::T8_3, TableId::T8_4, TableId::T8_5, TableId::T8_6};
  return ids;
}

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Golden: return "golden";
    case CellStatus::SuspectedErratum: return "suspected_erratum";
    case CellStatus::TruncationDependent: return "truncation_dependent";
    case CellStatus::Unavailable: return "unavailable";
  }
  return "?";
}

double golden_value(TableId id, double row_key, std::size_t column) {
  const std::string name = to_string(id);
  for (const auto& row : golden_rows())
    if (name == row.table && row.key == row_key) {
      if (column >= row.cells.size()) break;
      return row.cells[column];
    }
  throw ParameterDomainError("no printed cell " + name + " row " + row_key_text(row_key) + " column " +
                             std::to_string(column));
}

bool TableReport::all_gating_passed() const { return gating_failures() == 0; }

int TableReport::gating_failures() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const TableCell& c) {
    return c.gating() && !c.passed;
  }));
}

TableReport run_table(TableId id, const TableOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TableReport report;
  report.id = id;
  report.title = title_of(id);
  report.columns = columns_of(id);
  report.row_label = is_moment_table(id) ? "n" : "rho";

  const std::string name = to_string(id);
  std::vector<const GoldenRow*> rows;
  for (const auto& row : golden_rows())
    if (name == row.table) rows.push_back(&row);

  // outcomes[row][column]
  std::vector<RowOutcome> outcomes(rows.size(), RowOutcome(report.columns.size()));
  if (is_moment_table(id)) {
    std::vector<std::future<RowWork>> jobs;
    for (std::size_t c = 0; c < report.columns.size(); ++c)
      jobs.push_back(std::async(std::launch::async, compute_moment_column, id, c, std::cref(options)));
    for (std::size_t c = 0; c < jobs.size(); ++c) {
      auto work = jobs[c].get();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto n = static_cast<std::size_t>(rows[r]->key);
        outcomes[r][c] = work.cells.at(n - 1);
      }
      report.warnings.insert(report.warnings.end(), work.warnings.begin(), work.warnings.end());
    }
  } else {
    std::vector<std::future<RowWork>> jobs;
    for (const auto* row : rows)
      jobs.push_back(std::async(std::launch::async, compute_shape_row, id, row->key, std::cref(options)));
    for (std::size_t r = 0; r < jobs.size(); ++r) {
      auto work = jobs[r].get();
      outcomes[r] = std::move(work.cells);
      report.warnings.insert(report.warnings.end(), work.warnings.begin(), work.warnings.end());
    }
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      TableCell cell;
      cell.row_key = rows[r]->key;
      cell.column = report.columns[c];
      cell.golden = rows[r]->cells.at(c);
      cell.tolerance = tolerance_for(id, c, options.tolerances);
      cell.computed = outcomes[r][c].value;
      cell.diagnostic = outcomes[r][c].diagnostic;
      if (std::isnan(cell.golden)) {
        cell.status = CellStatus::Unavailable;
      } else if (const auto* e = find_erratum(id, cell.row_key, c)) {
        cell.status = CellStatus::SuspectedErratum;
        cell.corrected = e->corrected;
      } else if ((id == TableId::T7_1 || id == TableId::T7_2) && cell.row_key <= 10.0) {
        cell.status = CellStatus::TruncationDependent;
      }
      const double reference = cell.corrected.value_or(cell.golden);
      if (cell.computed && cell.computed->is_finite() && !cell.computed->is_zero() && !std::isnan(reference)) {
        cell.relative_error = relative_difference(*cell.computed, LogValue::from_double(reference));
        cell.passed = cell.relative_error <= cell.tolerance;
      } else {
        cell.relative_error = std::nan("");
        cell.passed = false;
        if (cell.diagnostic.empty() && cell.computed && !cell.computed->is_finite())
          cell.diagnostic = "computed value is not finite";
      }
      report.cells.push_back(std::move(cell));
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace busyq
