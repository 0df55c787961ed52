#include "qurc/app.hpp"

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qurc/csv.hpp"
#include "qurc/parallel.hpp"
#include "qurc/random.hpp"

namespace qurc::app {

std::string_view to_string(SweepKind k) { return k == SweepKind::Theta ? "theta" : "p"; }
std::string_view to_string(Pipeline p) {
  return p == Pipeline::Analytic ? "analytic" : "tomographic";
}

SweepKind sweep_kind_from_string(std::string_view s) {
  if (s == "theta") return SweepKind::Theta;
  if (s == "p") return SweepKind::P;
  throw Error(ErrorCode::InvalidConfig, "sweep kind must be theta or p, got '" + std::string(s) + "'");
}

Pipeline pipeline_from_string(std::string_view s) {
  if (s == "analytic") return Pipeline::Analytic;
  if (s == "tomographic") return Pipeline::Tomographic;
  throw Error(ErrorCode::InvalidConfig, "pipeline must be analytic or tomographic");
}

SettingsMode settings_from_string(std::string_view s) {
  if (s == "16" || s == "sixteen") return SettingsMode::Sixteen;
  if (s == "36" || s == "thirtysix") return SettingsMode::ThirtySix;
  throw Error(ErrorCode::InvalidConfig, "settings must be 16 or 36");
}

std::vector<double> standard_theta_grid() { return {0, 10, 20, 30, 40, 45, 50, 60, 70, 80, 90}; }

std::vector<double> standard_p_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

std::vector<double> SweepConfig::effective_grid() const {
  if (!grid.empty()) return grid;
  return kind == SweepKind::Theta ? standard_theta_grid() : standard_p_grid();
}

std::vector<double> SweepConfig::effective_fixed() const {
  if (!fixed_values.empty()) return fixed_values;
  return kind == SweepKind::Theta ? std::vector<double>{0.0, 1.0} : std::vector<double>{30.0, 45.0};
}

void SweepConfig::validate() const {
  const auto g = effective_grid();
  const auto f = effective_fixed();
  const auto in_theta = [](double v) { return v >= 0.0 && v <= 90.0; };
  const auto in_p = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(kind == SweepKind::Theta ? in_theta(g[i]) : in_p(g[i])))
      throw Error(ErrorCode::InvalidConfig, "grid value " + csv::number(g[i]) + " outside domain");
    if (i > 0 && !(g[i] > g[i - 1]))
      throw Error(ErrorCode::InvalidConfig, "grid must be strictly increasing");
  }
  for (double v : f)
    if (!(kind == SweepKind::Theta ? in_p(v) : in_theta(v)))
      throw Error(ErrorCode::InvalidConfig, "fixed value " + csv::number(v) + " outside domain");
  if (!(exposure > 0.0) || !std::isfinite(exposure))
    throw Error(ErrorCode::InvalidConfig, "exposure must be positive");
  if (mc_samples < 1) throw Error(ErrorCode::InvalidConfig, "mc_samples must be >= 1");
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : csv::split(text)) {
    if (item.empty()) continue;
    try {
      out.push_back(csv::parse_double(item));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, "not a number: '" + item + "'");
    }
  }
  return out;
}

namespace {

double parse_number(std::string_view key, std::string_view value) {
  const auto list = parse_number_list(value);
  if (list.size() != 1)
    throw Error(ErrorCode::InvalidConfig, std::string(key) + " expects one number");
  return list.front();
}

}  // namespace

void apply_config_entry(SweepConfig& c, std::string_view key, std::string_view value) {
  if (key == "sweep" || key == "sweep_kind" || key == "kind") {
    c.kind = sweep_kind_from_string(value);
  } else if (key == "fixed" || key == "fixed_value" || key == "fixed_values") {
    c.fixed_values = parse_number_list(value);
  } else if (key == "grid") {
    c.grid = value == "standard" ? std::vector<double>{} : parse_number_list(value);
  } else if (key == "pipeline") {
    c.pipeline = pipeline_from_string(value);
  } else if (key == "exposure") {
    c.exposure = parse_number(key, value);
  } else if (key == "mc_samples" || key == "mc-samples") {
    const double v = parse_number(key, value);
    if (v != std::floor(v)) throw Error(ErrorCode::InvalidConfig, "mc_samples must be an integer");
    c.mc_samples = static_cast<int>(v);
  } else if (key == "seed") {
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), c.seed);
    if (ec != std::errc{} || end != value.data() + value.size() || value.empty())
      throw Error(ErrorCode::InvalidConfig, "seed must be an unsigned 64-bit integer");
  } else if (key == "delta_variant" || key == "delta-variant") {
    c.delta_variant = delta_variant_from_string(value);
  } else if (key == "settings") {
    c.settings = settings_from_string(value);
  } else if (key == "output") {
    c.output_path = std::string(value);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(parse_number(key, value));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(SweepConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = csv::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(config, csv::trim(view.substr(0, eq)), csv::trim(view.substr(eq + 1)));
  }
}

const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> q = {"elhs", "erhs1", "erhs2",       "clhs", "crhs1", "crhs2",
                                             "s_ab", "s_b",   "s_a_given_b", "i_ab", "delta"};
  return q;
}

double SweepResult::value(const SweepRow& row, std::string_view column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw Error(ErrorCode::InvalidConfig, "no column " + std::string(column));
  return row.values[static_cast<std::size_t>(it - columns.begin())];
}

double SweepResult::std_dev(const SweepRow& row, std::string_view column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end() || row.std_devs.empty())
    throw Error(ErrorCode::InvalidConfig, "no std column for " + std::string(column));
  return row.std_devs[static_cast<std::size_t>(it - columns.begin())];
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const auto grid = config.effective_grid();
  const auto fixed = config.effective_fixed();
  const bool tomographic = config.pipeline == Pipeline::Tomographic;

  SweepResult result;
  result.config = config;
  result.columns = sweep_quantities();
  if (tomographic) result.columns.emplace_back("fidelity");
  result.has_std = tomographic && config.mc_samples > 1;
  result.rows.resize(fixed.size() * grid.size());

  const auto measurements = mub_qubit();
  const auto settings = standard_settings(config.settings);

  parallel_for(result.rows.size(), config.threads, [&](std::size_t idx) {
    SweepRow& row = result.rows[idx];
    row.branch = idx / grid.size();
    const double swept = grid[idx % grid.size()];
    const double held = fixed[row.branch];
    row.p = config.kind == SweepKind::Theta ? held : swept;
    row.theta_deg = config.kind == SweepKind::Theta ? swept : held;
    const DensityMatrix rho = bell_diagonal_state({row.p, row.theta_deg});
    const std::uint64_t point_seed = derive_seed(config.seed, idx);

    if (!tomographic) {
      const UncertaintyReport r = uncertainty_report(rho, measurements, config.delta_variant);
      for (const auto& q : result.columns) row.values.push_back(r.field(q));
      return;
    }
    if (config.mc_samples > 1) {
      MonteCarloOptions opts;
      opts.delta_variant = config.delta_variant;
      opts.threads = 1;
      const ErrorBarReport mc = monte_carlo_errors(rho, settings, config.exposure,
                                                   config.mc_samples, point_seed, result.columns, opts);
      row.values = mc.means;
      row.std_devs = mc.std_devs;
      return;
    }
    const CountTable table = simulate_counts(rho, settings, config.exposure, point_seed);
    const DensityMatrix rho_hat = mle_reconstruct(table).density();
    const UncertaintyReport r = uncertainty_report(rho_hat, measurements, config.delta_variant);
    for (const auto& q : result.columns)
      row.values.push_back(q == "fidelity" ? fidelity(rho_hat, rho) : r.field(q));
  });
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const SweepConfig& c = result.config;
  out << "# " << kSweepSchema << " kind=" << to_string(c.kind) << " pipeline=" << to_string(c.pipeline)
      << " delta_variant=" << to_string(c.delta_variant)
      << " settings=" << (c.settings == SettingsMode::Sixteen ? 16 : 36)
      << " exposure=" << csv::number(c.exposure) << " mc_samples=" << c.mc_samples
      << " seed=" << c.seed << '\n';
  out << "branch,theta_deg,p";
  for (const auto& col : result.columns) out << ',' << col;
  if (result.has_std)
    for (const auto& col : result.columns) out << ',' << col << "_std";
  out << '\n';
  for (const auto& row : result.rows) {
    out << row.branch << ',' << csv::number(row.theta_deg) << ',' << csv::number(row.p);
    for (double v : row.values) out << ',' << csv::number(v);
    if (result.has_std)
      for (double v : row.std_devs) out << ',' << csv::number(v);
    out << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + tmp + ": " + std::strerror(errno));
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string reason = std::strerror(errno);
    std::remove(tmp.c_str());
    throw Error(ErrorCode::IoError, "cannot rename to " + path + ": " + reason);
  }
}

std::ptrdiff_t SweepTable::column_index(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : it - columns.begin();
}

SweepTable read_sweep_csv(std::istream& in) {
  SweepTable t;
  std::string line;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    const std::string_view view = csv::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      std::string_view body = csv::trim(view.substr(1));
      if (body.substr(0, kSweepSchema.size()) == kSweepSchema) {
        schema_seen = true;
        std::istringstream words{std::string(body.substr(kSweepSchema.size()))};
        std::string word;
        while (words >> word) {
          const auto eq = word.find('=');
          if (eq != std::string::npos) t.meta[word.substr(0, eq)] = word.substr(eq + 1);
        }
      }
      continue;
    }
    if (t.columns.empty()) {
      t.columns = csv::split(view);
      continue;
    }
    const auto cells = csv::split(view);
    if (cells.size() != t.columns.size())
      throw Error(ErrorCode::MalformedCsv, "row width " + std::to_string(cells.size()) +
                                               " != header width " + std::to_string(t.columns.size()));
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(csv::parse_double(c));
    t.rows.push_back(std::move(row));
  }
  if (!schema_seen) throw Error(ErrorCode::MalformedCsv, "missing schema header line");
  if (t.columns.empty() || t.rows.empty()) throw Error(ErrorCode::MalformedCsv, "no data rows");
  for (const char* needed : {"branch", "theta_deg", "p", "elhs", "erhs1", "erhs2", "clhs", "crhs1", "crhs2"})
    if (t.column_index(needed) < 0)
      throw Error(ErrorCode::MalformedCsv, std::string("missing column ") + needed);
  return t;
}

Analysis analyze(double p, double theta_deg) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "p must lie in [0,1]");
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
    throw Error(ErrorCode::InvalidConfig, "theta must lie in [0,90] degrees");
  const DensityMatrix rho = bell_diagonal_state({p, theta_deg});
  const auto ms = mub_qubit();
  return {p, theta_deg, uncertainty_report(rho, ms, DeltaVariant::Consistent),
          uncertainty_report(rho, ms, DeltaVariant::AsPrinted)};
}

std::string format_analysis(const Analysis& a) {
  std::ostringstream out;
  out << "state rho_AB(p=" << a.p << ", theta=" << a.theta_deg << " deg)\n";
  out << std::fixed << std::setprecision(9);
  out << std::left << std::setw(16) << "quantity" << std::right << std::setw(16) << "consistent"
      << std::setw(16) << "as-printed" << '\n';
  for (const auto& name : UncertaintyReport::scalar_fields())
    out << std::left << std::setw(16) << name << std::right << std::setw(16)
        << a.consistent.field(name) << std::setw(16) << a.as_printed.field(name) << '\n';
  for (std::size_t m = 0; m < a.consistent.labels.size(); ++m) {
    const std::string tag = "[" + a.consistent.labels[m] + "]";
    out << std::left << std::setw(16) << ("S(M|B)" + tag) << std::right << std::setw(16)
        << a.consistent.conditional_entropies[m] << '\n';
    out << std::left << std::setw(16) << ("C_re" + tag) << std::right << std::setw(16)
        << a.consistent.coherences[m] << '\n';
    out << std::left << std::setw(16) << ("I(M:B)" + tag) << std::right << std::setw(16)
        << a.consistent.holevo[m] << '\n';
  }
  const auto verdict = [](const UncertaintyReport& r) {
    return r.worst_margin() >= -1e-9 ? "hold" : "VIOLATED";
  };
  out << "bounds: consistent " << verdict(a.consistent) << ", as-printed " << verdict(a.as_printed)
      << '\n';
  return out.str();
}

void write_analysis_csv(std::ostream& out, const Analysis& a) {
  out << "p,theta_deg,delta_variant";
  for (const auto& name : UncertaintyReport::scalar_fields()) out << ',' << name;
  out << '\n';
  for (const UncertaintyReport* r : {&a.consistent, &a.as_printed}) {
    out << csv::number(a.p) << ',' << csv::number(a.theta_deg) << ',' << to_string(r->delta_variant);
    for (const auto& name : UncertaintyReport::scalar_fields()) out << ',' << csv::number(r->field(name));
    out << '\n';
  }
}

int FuzzSummary::exit_code() const {
  return variant == DeltaVariant::Consistent && total_violations() > 0 ? 2 : 0;
}

namespace {

struct Anchor {
  std::string name;
  DensityMatrix rho;
};

std::vector<Anchor> anchor_states() {
  std::vector<Anchor> a;
  a.push_back({"rho(p=1,theta=45)", bell_diagonal_state({1.0, 45.0})});
  a.push_back({"rho(p=0,theta=45)", bell_diagonal_state({0.0, 45.0})});
  a.push_back({"rho(p=0.5,theta=45)", bell_diagonal_state({0.5, 45.0})});
  a.push_back({"rho(p=1,theta=0)", bell_diagonal_state({1.0, 0.0})});
  a.push_back({"I/4", maximally_mixed({2, 2})});
  return a;
}

}  // namespace

FuzzSummary bound_fuzz(const FuzzOptions& options) {
  if (options.n < 1) throw Error(ErrorCode::InvalidConfig, "fuzz needs n >= 1");
  if (options.purification_dims.empty())
    throw Error(ErrorCode::InvalidConfig, "no purification dimensions");
  const auto ms = mub_qubit();

  FuzzSummary s;
  s.variant = options.variant;
  s.worst_margin = std::numeric_limits<double>::infinity();

  const auto evaluate = [&](const DensityMatrix& rho, const std::string& origin, bool anchor) {
    const UncertaintyReport r = uncertainty_report(rho, ms, options.variant);
    ++s.evaluated;
    const std::pair<const char*, double> margins[] = {{"EUR", r.elhs - r.erhs1},
                                                       {"CUR", r.clhs - r.crhs1},
                                                       {"EUR+delta", r.elhs - r.erhs2},
                                                       {"CUR+delta", r.clhs - r.crhs2}};
    bool violated = false;
    for (const auto& [relation, margin] : margins) {
      if (margin < s.worst_margin) {
        s.worst_margin = margin;
        s.worst_origin = origin;
        s.worst_relation = relation;
        s.worst_state = rho.matrix();
      }
      if (margin < -options.tolerance) {
        violated = true;
        s.violations.push_back({origin, relation, margin});
      }
    }
    if (violated) ++(anchor ? s.anchor_violations : s.random_violations);
  };

  if (options.include_anchors)
    for (const auto& a : anchor_states()) evaluate(a.rho, a.name, true);

  for (int i = 0; i < options.n; ++i) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
    const auto& dims = options.purification_dims;
    const int k = dims[rng.next() % dims.size()];
    evaluate(random_mixed_state(2, 2, k, rng), "random #" + std::to_string(i), false);
  }
  return s;
}

std::string format_fuzz(const FuzzSummary& s) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "delta variant:     " << to_string(s.variant) << '\n'
      << "states evaluated:  " << s.evaluated << '\n'
      << "random violations: " << s.random_violations << '\n'
      << "anchor violations: " << s.anchor_violations << '\n'
      << "worst margin:      " << s.worst_margin << " (" << s.worst_relation << ", "
      << s.worst_origin << ")\n";
  if (s.total_violations() > 0) {
    if (s.variant == DeltaVariant::AsPrinted)
      out << "variant inconsistency: the as-printed delta makes the strengthened bounds fail on "
             "valid states\n";
    const std::size_t shown = std::min<std::size_t>(s.violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i)
      out << "  violation " << s.violations[i].relation << " on " << s.violations[i].origin
          << ": lhs - rhs = " << s.violations[i].margin << '\n';
  }
  out << "worst-case state (re, im):\n";
  for (Eigen::Index r = 0; r < s.worst_state.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < s.worst_state.cols(); ++c)
      out << std::setw(22) << s.worst_state(r, c).real() << std::setw(22) << s.worst_state(r, c).imag();
    out << '\n';
  }
  return out.str();
}

}  // namespace qurc::app
