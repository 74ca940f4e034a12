#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csls/bounds.hpp"

namespace csls {

/// gnuplot script drawing lower and upper bounds against N (log axis) from
/// the sweep CSV, one upper curve per level, with a line at 1.
void write_gnuplot_script(std::ostream& out, const std::string& csv_path, const std::vector<double>& levels);

/// Self-contained SVG rendering of the same figure.
void write_svg_plot(std::ostream& out, const std::vector<BoundsReport>& rows, const std::vector<double>& levels);

}  // namespace csls
