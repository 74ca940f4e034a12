#include "csls/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

namespace csls {

namespace {
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
}

void write_gnuplot_script(std::ostream& out, const std::string& csv_path, const std::vector<double>& levels) {
  out << "# Bounds on the constrained joint spectral radius versus the number of samples.\n";
  out << "# Usage: gnuplot plot_bounds.gp  (writes bounds.png)\n";
  out << "set datafile separator ','\n";
  out << "set datafile missing 'NA'\n";
  out << "set terminal pngcairo size 900,560\n";
  out << "set output 'bounds.png'\n";
  out << "set logscale x\n";
  out << "set xlabel 'N (samples)'\n";
  out << "set ylabel 'bound'\n";
  out << "set yrange [0:2]\n";
  out << "set key top right\n";
  out << "plot 1 with lines dt 2 lc rgb 'black' title 'stability threshold', \\\n";
  out << fmt::format("     '{}' using 1:($2=={} ? $10 : 1/0) with linespoints lc rgb 'gray' title 'lower bound'",
                     csv_path, levels.empty() ? 0.0 : levels.front());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    out << fmt::format(", \\\n     '{}' using 1:($2=={} ? $12 : 1/0) with linespoints lc rgb '{}' title 'upper, level {}'",
                       csv_path, levels[k], kColors[k % std::size(kColors)], levels[k]);
  }
  out << '\n';
}

void write_svg_plot(std::ostream& out, const std::vector<BoundsReport>& rows, const std::vector<double>& levels) {
  constexpr double kW = 800.0;
  constexpr double kH = 500.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 180.0;
  constexpr double kTop = 30.0;
  constexpr double kBottom = 60.0;
  const double y_max = 2.0;

  double n_min = 1.0;
  double n_max = 10.0;
  if (!rows.empty()) {
    n_min = static_cast<double>(rows.front().N);
    n_max = n_min;
    for (const auto& r : rows) {
      n_min = std::min(n_min, static_cast<double>(r.N));
      n_max = std::max(n_max, static_cast<double>(r.N));
    }
  }
  const double lx0 = std::floor(std::log10(std::max(1.0, n_min)));
  const double lx1 = std::max(lx0 + 1.0, std::ceil(std::log10(std::max(1.0, n_max))));
  auto px = [&](double n) { return kLeft + (std::log10(n) - lx0) / (lx1 - lx0) * (kW - kLeft - kRight); };
  auto py = [&](double v) { return kTop + (1.0 - std::clamp(v, 0.0, y_max) / y_max) * (kH - kTop - kBottom); };

  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">)",
                     kW, kH)
      << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", kLeft, kTop,
                     kW - kLeft - kRight, kH - kTop - kBottom)
      << '\n';
  for (double e = lx0; e <= lx1 + 1e-9; e += 1.0) {
    const double x = px(std::pow(10.0, e));
    out << fmt::format(R"(<line x1="{:.2f}" y1="{}" x2="{:.2f}" y2="{}" stroke="#ddd"/>)", x, kTop, x, kH - kBottom) << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{}" text-anchor="middle">1e{}</text>)", x, kH - kBottom + 18, static_cast<int>(e))
        << '\n';
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = y_max * k / 4.0;
    out << fmt::format(R"(<text x="{}" y="{:.2f}" text-anchor="end">{:.1f}</text>)", kLeft - 6, py(v) + 4, v) << '\n';
  }
  out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">N (samples)</text>)", (kLeft + kW - kRight) / 2,
                     kH - 15)
      << '\n';
  out << fmt::format(R"(<line x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="black" stroke-dasharray="6,4"/>)", kLeft,
                     py(1.0), kW - kRight, py(1.0))
      << '\n';

  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* color, const char* dash) {
    if (pts.empty()) return;
    out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="2"{} points=")", color, dash);
    for (const auto& [n, v] : pts) out << fmt::format("{:.2f},{:.2f} ", px(n), py(v));
    out << "\"/>\n";
  };

  std::map<std::size_t, double> lower;
  for (const auto& r : rows) lower[r.N] = r.lower_bound_sdp;
  std::vector<std::pair<double, double>> lower_pts;
  for (const auto& [n, v] : lower) lower_pts.emplace_back(static_cast<double>(n), v);
  polyline(lower_pts, "gray", "");

  double legend_y = kTop + 10;
  auto legend = [&](const char* color, const std::string& label) {
    out << fmt::format(R"(<line x1="{}" y1="{:.1f}" x2="{}" y2="{:.1f}" stroke="{}" stroke-width="2"/>)", kW - kRight + 10,
                       legend_y, kW - kRight + 35, legend_y, color)
        << '\n';
    out << fmt::format(R"(<text x="{}" y="{:.1f}">{}</text>)", kW - kRight + 40, legend_y + 4, label) << '\n';
    legend_y += 18;
  };
  legend("gray", "lower bound");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
      if (r.level == levels[k] && r.upper_bound) pts.emplace_back(static_cast<double>(r.N), *r.upper_bound);
    }
    const char* color = kColors[k % std::size(kColors)];
    polyline(pts, color, "");
    legend(color, fmt::format("upper, level {}", levels[k]));
  }
  out << "</svg>\n";
}

}  // namespace csls
