#include "busyq/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "busyq/errors.hpp"
#include "json.hpp"

namespace busyq {
namespace {

using nlohmann::json;

std::string fmt(double x, int digits = 8) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json context_json(const RenderContext& ctx) {
  return {{"distribution", ctx.distribution}, {"lambda", ctx.lambda}, {"rho", ctx.rho}, {"notes", ctx.notes}};
}

void csv_preamble(std::ostringstream& out, const RenderContext& ctx) {
  out << "# distribution: " << ctx.distribution << "\n# lambda: " << fmt(ctx.lambda, 17)
      << "\n# rho: " << fmt(ctx.rho, 17) << "\n";
  for (const auto& n : ctx.notes) out << "# note: " << n << "\n";
}

void markdown_preamble(std::ostringstream& out, const RenderContext& ctx) {
  out << "**" << ctx.distribution << "**, lambda = " << fmt(ctx.lambda) << ", rho = " << fmt(ctx.rho) << "\n\n";
}

void markdown_notes(std::ostringstream& out, const std::vector<std::string>& notes) {
  if (notes.empty()) return;
  out << "\n";
  for (const auto& n : notes) out << "> " << n << "\n";
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "markdown" || text == "md") return Format::Markdown;
  throw ParseError("unknown format '" + std::string(text) + "' (csv, json, markdown)");
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Markdown: return "markdown";
  }
  return "?";
}

std::string render_moments(const MomentSet& m, const RenderContext& ctx, Format f) {
  std::vector<std::string> notes = ctx.notes;
  notes.insert(notes.end(), m.warnings.begin(), m.warnings.end());
  std::ostringstream out;
  switch (f) {
    case Format::Json: {
      json j = context_json(ctx);
      j["notes"] = notes;
      j["provenance"] = std::string(to_string(m.provenance));
      j["divergent_from"] = m.divergent_from ? json(*m.divergent_from) : json(nullptr);
      j["degenerate"] = m.degenerate;
      json rows = json::array();
      for (int n = 1; n <= m.n_max(); ++n) {
        const auto& v = m.moment(n);
        rows.push_back({{"n", n},
                        {"value", v.to_string()},
                        {"sign", v.sign()},
                        {"log_abs", json_number(v.log_abs())},
                        {"divergent", m.is_divergent(n)}});
      }
      j["moments"] = rows;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv: {
      RenderContext c = ctx;
      c.notes = notes;
      csv_preamble(out, c);
      out << "# provenance: " << to_string(m.provenance) << "\n";
      out << "n,E[B^n],log10,divergent\n";
      for (int n = 1; n <= m.n_max(); ++n) {
        const auto& v = m.moment(n);
        out << n << "," << v.to_string() << "," << (v.is_zero() ? "-inf" : fmt(v.log10_abs(), 12)) << ","
            << (m.is_divergent(n) ? "true" : "false") << "\n";
      }
      break;
    }
    case Format::Markdown: {
      markdown_preamble(out, ctx);
      out << "| n | E[B^n] | divergent |\n|---|---|---|\n";
      for (int n = 1; n <= m.n_max(); ++n)
        out << "| " << n << " | " << m.moment(n).to_string() << " | " << (m.is_divergent(n) ? "yes" : "") << " |\n";
      out << "\nprovenance: " << to_string(m.provenance) << "\n";
      markdown_notes(out, notes);
      break;
    }
  }
  return out.str();
}

MomentSet parse_moments_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("moments JSON: ") + e.what());
  }
  MomentSet m;
  m.lambda = j.at("lambda").get<double>();
  m.rho = j.at("rho").get<double>();
  if (!j.at("divergent_from").is_null()) m.divergent_from = j["divergent_from"].get<int>();
  m.degenerate = j.value("degenerate", false);
  for (const auto& row : j.at("moments")) {
    const int sign = row.at("sign").get<int>();
    m.log_moments.push_back(sign == 0 ? LogValue::zero() : LogValue::from_log(row.at("log_abs").get<double>(), sign));
  }
  return m;
}

std::string render_shape(const ShapeStats& s, const RenderContext& ctx, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::Json: {
      json j = context_json(ctx);
      j["delta1"] = json_number(s.delta1);
      j["delta2"] = json_number(s.delta2);
      j["delta3"] = json_number(s.delta3);
      j["from_truncated"] = s.from_truncated;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      csv_preamble(out, ctx);
      out << "delta1,delta2,delta3,from_truncated\n"
          << fmt(s.delta1) << "," << fmt(s.delta2) << "," << fmt(s.delta3) << ","
          << (s.from_truncated ? "true" : "false") << "\n";
      break;
    case Format::Markdown:
      markdown_preamble(out, ctx);
      out << "| delta1 | delta2 | delta3 |\n|---|---|---|\n| " << fmt(s.delta1) << " | " << fmt(s.delta2) << " | "
          << fmt(s.delta3) << " |\n";
      if (s.from_truncated) out << "\nbuilt from truncated moments of a divergent law\n";
      markdown_notes(out, ctx.notes);
      break;
  }
  return out.str();
}

std::string render_grid(const GridFunction& g, const RenderContext& ctx, Format f, std::string_view value_name) {
  std::ostringstream out;
  switch (f) {
    case Format::Json: {
      json j = context_json(ctx);
      j["kind"] = g.kind == GridFunction::Kind::CDF ? "cdf" : "density";
      j["t0"] = g.t0;
      j["dt"] = g.dt;
      json t = json::array();
      for (std::size_t i = 0; i < g.size(); ++i) t.push_back(g.t(i));
      j["t"] = t;
      j[std::string(value_name)] = g.values;
      j["value_name"] = std::string(value_name);
      out << j.dump() << "\n";
      break;
    }
    case Format::Csv:
      csv_preamble(out, ctx);
      out << "t," << value_name << "\n";
      for (std::size_t i = 0; i < g.size(); ++i) out << fmt(g.t(i), 12) << "," << fmt(g.values[i], 12) << "\n";
      break;
    case Format::Markdown:
      markdown_preamble(out, ctx);
      out << "| t | " << value_name << " |\n|---|---|\n";
      for (std::size_t i = 0; i < g.size(); ++i) out << "| " << fmt(g.t(i)) << " | " << fmt(g.values[i]) << " |\n";
      markdown_notes(out, ctx.notes);
      break;
  }
  return out.str();
}

GridFunction parse_grid_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid JSON: ") + e.what());
  }
  GridFunction g;
  g.kind = j.at("kind").get<std::string>() == "cdf" ? GridFunction::Kind::CDF : GridFunction::Kind::Density;
  g.t0 = j.at("t0").get<double>();
  g.dt = j.at("dt").get<double>();
  g.values = j.at(j.at("value_name").get<std::string>()).get<std::vector<double>>();
  return g;
}

std::string render_lst(double s, double value, double complement, const RenderContext& ctx, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::Json: {
      json j = context_json(ctx);
      j["s"] = s;
      j["lst"] = value;
      j["one_minus_lst"] = complement;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      csv_preamble(out, ctx);
      out << "s,lst,one_minus_lst\n" << fmt(s, 17) << "," << fmt(value, 17) << "," << fmt(complement, 17) << "\n";
      break;
    case Format::Markdown:
      markdown_preamble(out, ctx);
      out << "| s | E[exp(-sB)] | 1 - E[exp(-sB)] |\n|---|---|---|\n| " << fmt(s) << " | " << fmt(value, 12)
          << " | " << fmt(complement, 12) << " |\n";
      markdown_notes(out, ctx.notes);
      break;
  }
  return out.str();
}

std::string render_simulation(const SimulationReport& r, const RenderContext& ctx, Format f) {
  std::vector<std::string> notes = ctx.notes;
  notes.insert(notes.end(), r.warnings.begin(), r.warnings.end());
  const auto& s = r.summary;
  std::ostringstream out;
  switch (f) {
    case Format::Json: {
      json j = context_json(ctx);
      j["notes"] = notes;
      j["count"] = s.count;
      j["truncated_periods"] = r.truncated_periods;
      json rows = json::array();
      for (int k = 0; k < 4; ++k)
        rows.push_back({{"order", k + 1},
                        {"moment", json_number(s.moments[k])},
                        {"standard_error", json_number(s.standard_errors[k])},
                        {"infinite_moment", s.infinite_moment[k]}});
      j["moments"] = rows;
      j["empirical_cdf"] = {{"dt", r.empirical_cdf.dt}, {"B", r.empirical_cdf.values}};
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      {
        RenderContext c = ctx;
        c.notes = notes;
        csv_preamble(out, c);
      }
      out << "# count: " << s.count << "\n# truncated_periods: " << r.truncated_periods << "\n";
      out << "order,moment,standard_error,infinite_moment\n";
      for (int k = 0; k < 4; ++k)
        out << k + 1 << "," << fmt(s.moments[k], 10) << "," << fmt(s.standard_errors[k], 6) << ","
            << (s.infinite_moment[k] ? "true" : "false") << "\n";
      break;
    case Format::Markdown:
      markdown_preamble(out, ctx);
      out << s.count << " busy periods, " << r.truncated_periods << " truncated\n\n";
      out << "| order | sample moment | std. error |\n|---|---|---|\n";
      for (int k = 0; k < 4; ++k)
        out << "| " << k + 1 << " | " << fmt(s.moments[k], 10) << " | "
            << (s.infinite_moment[k] ? std::string("infinite moment") : fmt(s.standard_errors[k], 4)) << " |\n";
      markdown_notes(out, notes);
      break;
  }
  return out.str();
}

std::string render_table(const TableReport& r, Format f) {
  std::ostringstream out;
  auto computed_text = [](const TableCell& c) { return c.computed ? c.computed->to_string() : std::string("-"); };
  auto verdict = [](const TableCell& c) -> std::string {
    switch (c.status) {
      case CellStatus::Golden: return c.passed ? "pass" : "FAIL";
      case CellStatus::SuspectedErratum:
        return c.corrected ? (c.passed ? "erratum (corrected value matches)" : "erratum (corrected value differs)")
                           : "erratum (informational)";
      case CellStatus::TruncationDependent: return "informational";
      case CellStatus::Unavailable: return "not printed";
    }
    return "?";
  };
  switch (f) {
    case Format::Json: {
      json cells = json::array();
      for (const auto& c : r.cells)
        cells.push_back({{"row", c.row_key},
                         {"column", c.column},
                         {"status", std::string(to_string(c.status))},
                         {"computed", c.computed ? json(c.computed->to_string()) : json(nullptr)},
                         {"computed_log_abs", c.computed ? json_number(c.computed->log_abs()) : json(nullptr)},
                         {"golden", json_number(c.golden)},
                         {"corrected", c.corrected ? json(*c.corrected) : json(nullptr)},
                         {"relative_error", json_number(c.relative_error)},
                         {"tolerance", c.tolerance},
                         {"passed", c.passed},
                         {"gating", c.gating()},
                         {"diagnostic", c.diagnostic}});
      json j = {{"table", to_string(r.id)},
                {"title", r.title},
                {"row_label", r.row_label},
                {"columns", r.columns},
                {"cells", cells},
                {"warnings", r.warnings},
                {"gating_failures", r.gating_failures()},
                {"passed", r.all_gating_passed()}};
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << "# " << to_string(r.id) << ": " << r.title << "\n";
      for (const auto& w : r.warnings) out << "# warning: " << w << "\n";
      out << r.row_label << ",column,computed,printed,corrected,relative_error,tolerance,status,verdict\n";
      for (const auto& c : r.cells)
        out << fmt(c.row_key) << "," << c.column << "," << computed_text(c) << "," << fmt(c.golden) << ","
            << (c.corrected ? fmt(*c.corrected) : "") << "," << fmt(c.relative_error, 3) << "," << fmt(c.tolerance, 3)
            << "," << to_string(c.status) << "," << verdict(c) << "\n";
      out << "# gating failures: " << r.gating_failures() << "\n";
      break;
    case Format::Markdown:
      out << "### " << to_string(r.id) << ": " << r.title << "\n\n";
      out << "| " << r.row_label << " | column | computed | printed | rel. error | verdict |\n"
          << "|---|---|---|---|---|---|\n";
      for (const auto& c : r.cells) {
        out << "| " << fmt(c.row_key) << " | " << c.column << " | " << computed_text(c) << " | " << fmt(c.golden)
            << " | " << fmt(c.relative_error, 3) << " | " << verdict(c);
        if (!c.diagnostic.empty()) out << " (" << c.diagnostic << ")";
        out << " |\n";
      }
      out << "\ngating failures: " << r.gating_failures() << "\n";
      markdown_notes(out, r.warnings);
      break;
  }
  return out.str();
}

}  // namespace busyq
