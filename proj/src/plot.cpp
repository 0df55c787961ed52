#include "qurc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qurc/csv.hpp"

namespace qurc::app {

namespace {

constexpr double kPanelW = 420, kPanelH = 300;
constexpr double kMarginL = 60, kMarginR = 30, kMarginT = 56, kMarginB = 50;

struct Series {
  const char* column;
  const char* label;
  const char* color;
  const char* shape;  // square, rhombus, triangle
};

constexpr Series kEntropic[] = {{"elhs", "ELHS", "#7b3f9e", "square"},
                                {"erhs1", "ERHS1", "#8b5a2b", "rhombus"},
                                {"erhs2", "ERHS2", "#ff8c00", "triangle"}};
constexpr Series kCoherence[] = {{"clhs", "CLHS", "#7b3f9e", "square"},
                                 {"crhs1", "CRHS1", "#8b5a2b", "rhombus"},
                                 {"crhs2", "CRHS2", "#ff8c00", "triangle"}};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string marker(const char* shape, double x, double y, const char* color,
                   const char* cls = "marker") {
  std::ostringstream s;
  const double r = 4.5;
  if (std::string_view(shape) == "square") {
    s << "<rect class=\"" << cls << "\" x=\"" << fmt(x - r) << "\" y=\"" << fmt(y - r) << "\" width=\""
      << fmt(2 * r) << "\" height=\"" << fmt(2 * r) << "\" fill=\"" << color << "\"/>";
  } else if (std::string_view(shape) == "rhombus") {
    s << "<polygon class=\"" << cls << "\" points=\"" << fmt(x) << ',' << fmt(y - r) << ' ' << fmt(x + r)
      << ',' << fmt(y) << ' ' << fmt(x) << ',' << fmt(y + r) << ' ' << fmt(x - r) << ',' << fmt(y)
      << "\" fill=\"" << color << "\"/>";
  } else {
    s << "<polygon class=\"" << cls << "\" points=\"" << fmt(x) << ',' << fmt(y - r) << ' ' << fmt(x + r)
      << ',' << fmt(y + r) << ' ' << fmt(x - r) << ',' << fmt(y + r) << "\" fill=\"" << color
      << "\"/>";
  }
  return s.str();
}

// Short tick label: 45, 0.2, -1.
std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// 1, 2, 2.5 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0})
    if (raw <= m * mag * (1 + 1e-9)) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_sweep_svg(const SweepTable& t) {
  const bool theta_sweep = t.meta.count("kind") == 0 || t.meta.at("kind") == "theta";
  const bool analytic = t.meta.count("pipeline") == 0 || t.meta.at("pipeline") == "analytic";
  const std::ptrdiff_t xcol = t.column_index(theta_sweep ? "theta_deg" : "p");
  const std::ptrdiff_t fixcol = t.column_index(theta_sweep ? "p" : "theta_deg");
  const std::ptrdiff_t bcol = t.column_index("branch");

  std::set<double> branch_set;
  for (const auto& r : t.rows) branch_set.insert(r[static_cast<std::size_t>(bcol)]);
  const std::vector<double> branches(branch_set.begin(), branch_set.end());

  double xmin = INFINITY, xmax = -INFINITY;
  for (const auto& r : t.rows) {
    xmin = std::min(xmin, r[static_cast<std::size_t>(xcol)]);
    xmax = std::max(xmax, r[static_cast<std::size_t>(xcol)]);
  }
  if (xmax <= xmin) xmax = xmin + 1;

  std::ostringstream svg;
  const double width = 2 * kPanelW, height = 2 * kPanelH;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (std::size_t row = 0; row < 2; ++row) {
    for (std::size_t col = 0; col < 2; ++col) {
      const double ox = static_cast<double>(col) * kPanelW;
      const double oy = static_cast<double>(row) * kPanelH;
      const double px0 = ox + kMarginL, px1 = ox + kPanelW - kMarginR;
      const double py0 = oy + kMarginT, py1 = oy + kPanelH - kMarginB;
      const std::string name = std::string(1, static_cast<char>('a' + row)) + std::to_string(col + 1);
      svg << "<g class=\"panel\" id=\"panel-" << name << "\">\n";

      if (row >= branches.size()) {
        svg << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt((py0 + py1) / 2)
            << "\" text-anchor=\"middle\">(" << name << ") no data</text>\n</g>\n";
        continue;
      }
      const double branch = branches[row];
      const auto& series = col == 0 ? kEntropic : kCoherence;

      std::vector<const std::vector<double>*> rows;
      for (const auto& r : t.rows)
        if (r[static_cast<std::size_t>(bcol)] == branch) rows.push_back(&r);
      std::sort(rows.begin(), rows.end(), [&](auto* a, auto* b) {
        return (*a)[static_cast<std::size_t>(xcol)] < (*b)[static_cast<std::size_t>(xcol)];
      });

      double ymin = 0.0, ymax = 1.0;
      for (const auto& s : series) {
        const auto c = static_cast<std::size_t>(t.column_index(s.column));
        const std::ptrdiff_t sc = t.column_index(std::string(s.column) + "_std");
        for (const auto* r : rows) {
          const double sd = sc >= 0 ? (*r)[static_cast<std::size_t>(sc)] : 0.0;
          ymin = std::min(ymin, (*r)[c] - sd);
          ymax = std::max(ymax, (*r)[c] + sd);
        }
      }
      ymin = std::floor(ymin * 2) / 2;
      ymax = std::ceil(ymax * 2) / 2;
      const auto sx = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
      const auto sy = [&](double y) { return py1 - (y - ymin) / (ymax - ymin) * (py1 - py0); };

      svg << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py0) << "\" width=\"" << fmt(px1 - px0)
          << "\" height=\"" << fmt(py1 - py0) << "\" fill=\"none\" stroke=\"black\"/>\n";
      const double xstep = nice_step(xmax - xmin, 6);
      for (double xv = std::ceil(xmin / xstep - 1e-9) * xstep; xv <= xmax + 1e-9 * xstep; xv += xstep)
        svg << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(py1 + 16)
            << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
      const double ystep = nice_step(ymax - ymin, 5);
      for (double yv = std::ceil(ymin / ystep - 1e-9) * ystep; yv <= ymax + 1e-9 * ystep; yv += ystep)
        svg << "<text x=\"" << fmt(px0 - 6) << "\" y=\"" << fmt(sy(yv) + 4)
            << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
      const double held = (*rows.front())[static_cast<std::size_t>(fixcol)];
      const std::string fixed_label =
          theta_sweep ? "p = " + tick(held) : "theta = " + tick(held) + " deg";
      svg << "<text x=\"" << fmt(px0) << "\" y=\"" << fmt(oy + 24) << "\">(" << name << ") "
          << (col == 0 ? "entropic uncertainty" : "coherence") << ", " << fixed_label << "</text>\n";
      svg << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(py1 + 34)
          << "\" text-anchor=\"middle\">" << (theta_sweep ? "theta (deg)" : "p") << "</text>\n";

      for (std::size_t si = 0; si < 3; ++si) {
        const Series& s = series[si];
        const auto c = static_cast<std::size_t>(t.column_index(s.column));
        const std::ptrdiff_t sc = t.column_index(std::string(s.column) + "_std");
        if (analytic) {
          svg << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << s.color
              << "\" stroke-width=\"2\" points=\"";
          for (const auto* r : rows)
            svg << fmt(sx((*r)[static_cast<std::size_t>(xcol)])) << ',' << fmt(sy((*r)[c])) << ' ';
          svg << "\"/>\n";
        } else {
          for (const auto* r : rows) {
            const double x = sx((*r)[static_cast<std::size_t>(xcol)]);
            if (sc >= 0) {
              const double sd = (*r)[static_cast<std::size_t>(sc)];
              svg << "<line class=\"errbar\" x1=\"" << fmt(x) << "\" x2=\"" << fmt(x) << "\" y1=\""
                  << fmt(sy((*r)[c] - sd)) << "\" y2=\"" << fmt(sy((*r)[c] + sd)) << "\" stroke=\""
                  << s.color << "\"/>\n";
            }
            svg << marker(s.shape, x, sy((*r)[c]), s.color) << '\n';
          }
        }
        // Legend strip between the title and the plot area.
        const double lx = px0 + 80 * static_cast<double>(si);
        if (analytic)
          svg << "<line class=\"legend\" x1=\"" << fmt(lx) << "\" x2=\"" << fmt(lx + 10) << "\" y1=\""
              << fmt(oy + 40) << "\" y2=\"" << fmt(oy + 40) << "\" stroke=\"" << s.color
              << "\" stroke-width=\"2\"/>\n";
        else
          svg << marker(s.shape, lx + 5, oy + 40, s.color, "legend") << '\n';
        svg << "<text x=\"" << fmt(lx + 14) << "\" y=\"" << fmt(oy + 44) << "\" fill=\"" << s.color
            << "\">" << s.label << "</text>\n";
      }
      svg << "</g>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void plot(const std::string& csv_path, const std::string& output_path) {
  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + csv_path);
  const SweepTable table = read_sweep_csv(in);
  write_file_atomic(output_path, render_sweep_svg(table));
}

}  // namespace qurc::app
