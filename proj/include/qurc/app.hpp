#pragma once

// Sweeps, single-state analysis and bound fuzzing behind the command-line
// tool. Everything here is usable without the CLI.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qurc/infotheory.hpp"
#include "qurc/tomography.hpp"

namespace qurc::app {

inline constexpr std::string_view kSweepSchema = "qurc-sweep v1";

enum class SweepKind { Theta, P };
enum class Pipeline { Analytic, Tomographic };

std::string_view to_string(SweepKind k);
std::string_view to_string(Pipeline p);
SweepKind sweep_kind_from_string(std::string_view s);
Pipeline pipeline_from_string(std::string_view s);
SettingsMode settings_from_string(std::string_view s);

struct SweepConfig {
  SweepKind kind = SweepKind::Theta;
  // Values of the parameter held fixed, one branch each. Empty means
  // {0, 1} (p) for theta sweeps and {30, 45} (theta, degrees) for p sweeps.
  std::vector<double> fixed_values;
  // Empty means 0,10,20,30,40,45,50,60,70,80,90 deg or p = 0, 0.1, ..., 1.
  std::vector<double> grid;
  Pipeline pipeline = Pipeline::Analytic;
  double exposure = 1e4;
  int mc_samples = 100;
  std::uint64_t seed = 1;
  DeltaVariant delta_variant = DeltaVariant::Consistent;
  SettingsMode settings = SettingsMode::ThirtySix;
  std::string output_path;
  unsigned threads = 0;

  std::vector<double> effective_grid() const;
  std::vector<double> effective_fixed() const;
  /// Throws InvalidConfig.
  void validate() const;
};

std::vector<double> standard_theta_grid();
std::vector<double> standard_p_grid();

/// Applies `key = value` lines (blank lines and '#' comments ignored).
void apply_config_text(SweepConfig& config, std::istream& in);
void apply_config_entry(SweepConfig& config, std::string_view key, std::string_view value);
std::vector<double> parse_number_list(std::string_view text);

/// Quantities reported per sweep row, in column order.
const std::vector<std::string>& sweep_quantities();

struct SweepRow {
  std::size_t branch = 0;
  double theta_deg = 0;
  double p = 0;
  std::vector<double> values;    // aligned with SweepResult::columns
  std::vector<double> std_devs;  // empty unless Monte Carlo statistics exist
};

struct SweepResult {
  SweepConfig config;
  std::vector<std::string> columns;  // sweep_quantities() plus "fidelity" when tomographic
  bool has_std = false;
  std::vector<SweepRow> rows;  // ordered by (branch, grid value)

  double value(const SweepRow& row, std::string_view column) const;
  double std_dev(const SweepRow& row, std::string_view column) const;
};

SweepResult run_sweep(const SweepConfig& config);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Writes via a temporary file and rename. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

/// Parsed sweep CSV: header metadata plus numeric columns.
struct SweepTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::ptrdiff_t column_index(std::string_view name) const;
};

/// Throws MalformedCsv.
SweepTable read_sweep_csv(std::istream& in);

struct Analysis {
  double p = 0;
  double theta_deg = 0;
  UncertaintyReport consistent;
  UncertaintyReport as_printed;
};

Analysis analyze(double p, double theta_deg);
std::string format_analysis(const Analysis& a);
void write_analysis_csv(std::ostream& out, const Analysis& a);

struct FuzzOptions {
  int n = 10000;
  std::uint64_t seed = 1;
  DeltaVariant variant = DeltaVariant::Consistent;
  std::vector<int> purification_dims = {1, 2, 4};
  bool include_anchors = true;
  double tolerance = 1e-9;
};

struct FuzzViolation {
  std::string origin;    // "random #17" or an anchor name
  std::string relation;  // "EUR", "CUR", "EUR+delta", "CUR+delta"
  double margin = 0;     // lhs - rhs
};

struct FuzzSummary {
  int evaluated = 0;
  int random_violations = 0;
  int anchor_violations = 0;
  double worst_margin = 0;
  std::string worst_origin;
  std::string worst_relation;
  ComplexMatrix worst_state;
  std::vector<FuzzViolation> violations;
  DeltaVariant variant = DeltaVariant::Consistent;

  int total_violations() const { return random_violations + anchor_violations; }
  /// 2 when a violation occurs under the consistent variant, else 0.
  int exit_code() const;
};

FuzzSummary bound_fuzz(const FuzzOptions& options);
std::string format_fuzz(const FuzzSummary& s);

}  // namespace qurc::app
