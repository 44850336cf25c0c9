#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "busyq/moments.hpp"
#include "busyq/simulate.hpp"
#include "busyq/tables.hpp"
#include "busyq/transforms.hpp"

namespace busyq {

enum class Format { Csv, Json, Markdown };

Format parse_format(std::string_view text);
std::string_view to_string(Format f);

/// Description of the queue a result belongs to.
struct RenderContext {
  std::string distribution;
  double lambda = 0.0;
  double rho = 0.0;
  std::vector<std::string> notes;
};

std::string render_moments(const MomentSet& m, const RenderContext& ctx, Format f);
std::string render_shape(const ShapeStats& s, const RenderContext& ctx, Format f);
std::string render_grid(const GridFunction& g, const RenderContext& ctx, Format f, std::string_view value_name = "B");
std::string render_lst(double s, double value, double complement, const RenderContext& ctx, Format f);
std::string render_simulation(const SimulationReport& r, const RenderContext& ctx, Format f);
std::string render_table(const TableReport& r, Format f);

/// Inverse of the JSON form of render_moments; log magnitudes come back bit-exact.
MomentSet parse_moments_json(std::string_view text);
/// Inverse of the JSON form of render_grid.
GridFunction parse_grid_json(std::string_view text);

}  // namespace busyq
