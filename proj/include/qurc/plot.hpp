#pragma once

#include <string>

#include "qurc/app.hpp"

namespace qurc::app {

/// Four-panel SVG of a sweep: rows (a)/(b) are the first two branches,
/// columns (1)/(2) the entropic and coherence relations. Analytic sweeps are
/// drawn as solid curves; tomographic sweeps as markers with error bars when
/// standard deviations are present.
std::string render_sweep_svg(const SweepTable& table);

/// Reads a sweep CSV and writes the SVG. Throws MalformedCsv or IoError.
void plot(const std::string& csv_path, const std::string& output_path);

}  // namespace qurc::app
