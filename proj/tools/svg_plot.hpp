#pragma once

#include <string>
#include <vector>

#include "table.hpp"

namespace mcf::cli {

enum class Axes { Linear, LogLog };

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;  // empty: every column except x
  Axes axes = Axes::Linear;
  std::string title;
  std::string note;  // extra annotation line, e.g. a fitted slope
};

/// Fixed 640x480 canvas, fixed tick rules, fixed number formatting: the same
/// table always produces the same bytes.
std::string render_svg(const Table& t, const PlotSpec& spec);

void plot_series(const std::string& csv_in, const std::string& svg_out, const PlotSpec& spec);

}  // namespace mcf::cli
