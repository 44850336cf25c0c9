#pragma once

#include <optional>
#include <string>
#include <vector>

#include "busyq/log_value.hpp"
#include "busyq/quadrature.hpp"

namespace busyq {

enum class TableId { T3_1, T4_1, T5_1, T6_1, T7_1, T7_2, T8_1, T8_2, T8_3, T8_4, T8_5, T8_6 };

/// Accepts "T3.1", "T3_1", "t3.1" and "3.1".
TableId parse_table_id(std::string_view text);
std::string to_string(TableId id);
const std::vector<TableId>& all_tables();

enum class CellStatus {
  Golden,
  /// Printed value is a visible typo; reported, never gates.
  SuspectedErratum,
  /// Depends on the quadrature horizon of a divergent integral; informational.
  TruncationDependent,
  /// The printed table has no value here.
  Unavailable,
};
std::string_view to_string(CellStatus s);

struct Tolerances {
  double closed_form = 1e-6;
  double quadrature = 5e-4;
  double pareto = 1e-3;
};

struct TableOptions {
  Tolerances tolerances;
  QuadratureSettings quadrature;
  /// Horizon cap used for the Pareto tables when no explicit horizon is set.
  double pareto_horizon_cap = 1e6;
};

struct TableCell {
  double row_key = 0.0;  // rho, or n for the moment tables
  std::string column;
  CellStatus status = CellStatus::Golden;
  std::optional<LogValue> computed;
  double golden = 0.0;  // NaN when unavailable
  /// Digit-level correction of a suspected erratum, when one exists.
  std::optional<double> corrected;
  double tolerance = 0.0;
  double relative_error = 0.0;
  bool passed = false;
  std::string diagnostic;

  bool gating() const { return status == CellStatus::Golden; }
};

struct TableReport {
  TableId id = TableId::T3_1;
  std::string title;
  std::string row_label;
  std::vector<std::string> columns;
  std::vector<TableCell> cells;  // row-major
  std::vector<std::string> warnings;
  double seconds = 0.0;

  bool all_gating_passed() const;
  int gating_failures() const;
};

/// Recomputes every cell and compares it with the printed value.
TableReport run_table(TableId id, const TableOptions& options = {});

/// Printed value of one cell, or NaN; throws for unknown coordinates.
double golden_value(TableId id, double row_key, std::size_t column);

}  // namespace busyq
