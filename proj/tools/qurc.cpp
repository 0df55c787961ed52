// qurc: uncertainty-relation sweeps, single-state analysis, tomography
// simulation, bound fuzzing and plotting.
//
// Exit codes: 0 success, 1 usage error, 2 inequality violation (fuzz,
// consistent variant), 3 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qurc/app.hpp"
#include "qurc/csv.hpp"
#include "qurc/plot.hpp"
#include "qurc/tomography.hpp"

namespace {

using namespace qurc;

constexpr int kUsage = 1;
constexpr int kIo = 3;

// Flags that map onto config keys; only flags present on the command line
// override the config file.
struct SharedFlags {
  std::vector<std::pair<std::string, CLI::Option*>> bound;
  std::vector<std::pair<std::string, std::string>> values;
  std::string config_path;

  void add(CLI::App* cmd) {
    values = {{"seed", ""},      {"delta_variant", ""}, {"pipeline", ""}, {"exposure", ""},
              {"mc_samples", ""}, {"settings", ""},     {"output", ""}};
    const char* flags[] = {"--seed", "--delta-variant", "--pipeline", "--exposure",
                           "--mc-samples", "--settings", "--output"};
    const char* help[] = {"RNG seed (u64)",
                          "consistent|as-printed",
                          "analytic|tomographic",
                          "expected pairs per tomography setting",
                          "Monte Carlo samples per point",
                          "tomography settings: 16|36",
                          "output path"};
    for (std::size_t i = 0; i < values.size(); ++i)
      bound.emplace_back(values[i].first, cmd->add_option(flags[i], values[i].second, help[i]));
    cmd->add_option("--config", config_path, "key = value config file");
  }

  app::SweepConfig resolve(app::SweepConfig base = {}) const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::IoError, "cannot open config " + config_path);
      app::apply_config_text(base, in);
    }
    for (std::size_t i = 0; i < bound.size(); ++i)
      if (bound[i].second->count() > 0) app::apply_config_entry(base, values[i].first, values[i].second);
    return base;
  }
};

int report_error(const Error& e) {
  std::cerr << "error: " << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::IoError:
    case ErrorCode::MalformedCsv:
      return kIo;
    default:
      return kUsage;
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    app::write_file_atomic(path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Entropic and coherence uncertainty relations under mutually unbiased bases"};
  cli.require_subcommand(1);

  // sweep
  auto* sweep = cli.add_subcommand("sweep", "Sweep theta or p over the Bell-like state family");
  SharedFlags sweep_flags;
  sweep_flags.add(sweep);
  std::string sweep_kind, sweep_fixed, sweep_grid, sweep_threads;
  auto* kind_opt = sweep->add_option("--kind", sweep_kind, "theta|p");
  auto* fixed_opt = sweep->add_option("--fixed", sweep_fixed, "comma list of held values (one branch each)");
  auto* grid_opt = sweep->add_option("--grid", sweep_grid, "comma list of swept values, or 'standard'");
  auto* threads_opt = sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");

  // analyze
  auto* analyze = cli.add_subcommand("analyze", "Full report for one state rho_AB(p, theta)");
  double an_p = 1.0, an_theta = 45.0;
  std::string an_output;
  analyze->add_option("--p", an_p, "mixing weight in [0,1]");
  analyze->add_option("--theta", an_theta, "angle in degrees, [0,90]");
  analyze->add_option("--output", an_output, "also write a CSV with one row per delta variant");

  // tomo-sim
  auto* tomo = cli.add_subcommand("tomo-sim", "Simulate counts and reconstruct a state");
  SharedFlags tomo_flags;
  tomo_flags.add(tomo);
  double tomo_p = 1.0, tomo_theta = 30.0;
  std::string counts_in, recon_out, method = "mle";
  tomo->add_option("--p", tomo_p, "mixing weight in [0,1]");
  tomo->add_option("--theta", tomo_theta, "angle in degrees");
  tomo->add_option("--counts", counts_in, "reconstruct from an existing count table CSV");
  tomo->add_option("--reconstruction", recon_out, "write the reconstructed matrix here");
  tomo->add_option("--method", method, "mle|linear")->check(CLI::IsMember({"mle", "linear"}));

  // fuzz
  auto* fuzz = cli.add_subcommand("fuzz", "Check the bounds on random two-qubit mixed states");
  SharedFlags fuzz_flags;
  fuzz_flags.add(fuzz);
  int fuzz_n = 10000;
  std::string fuzz_k = "1,2,4";
  bool no_anchors = false;
  fuzz->add_option("--n", fuzz_n, "number of random states");
  fuzz->add_option("--k", fuzz_k, "purification dimensions to draw from");
  fuzz->add_flag("--no-anchors", no_anchors, "skip the fixed showcase states");

  // plot
  auto* plot = cli.add_subcommand("plot", "Render a sweep CSV as a four-panel SVG");
  std::string plot_in, plot_out;
  plot->add_option("--input", plot_in, "sweep CSV")->required();
  plot->add_option("--output", plot_out, "SVG path")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kUsage;
  }

  try {
    if (sweep->parsed()) {
      app::SweepConfig config = sweep_flags.resolve();
      if (kind_opt->count()) app::apply_config_entry(config, "kind", sweep_kind);
      if (fixed_opt->count()) app::apply_config_entry(config, "fixed", sweep_fixed);
      if (grid_opt->count()) app::apply_config_entry(config, "grid", sweep_grid);
      if (threads_opt->count()) app::apply_config_entry(config, "threads", sweep_threads);
      const app::SweepResult result = app::run_sweep(config);
      std::ostringstream out;
      app::write_sweep_csv(out, result);
      emit(config.output_path, out.str());
      if (!config.output_path.empty())
        std::cerr << "wrote " << result.rows.size() << " rows to " << config.output_path << '\n';
      return 0;
    }

    if (analyze->parsed()) {
      const app::Analysis a = app::analyze(an_p, an_theta);
      std::cout << app::format_analysis(a);
      if (!an_output.empty()) {
        std::ostringstream out;
        app::write_analysis_csv(out, a);
        app::write_file_atomic(an_output, out.str());
      }
      return 0;
    }

    if (tomo->parsed()) {
      app::SweepConfig defaults;
      defaults.output_path.clear();
      const app::SweepConfig config = tomo_flags.resolve(defaults);
      const DensityMatrix truth = bell_diagonal_state({tomo_p, tomo_theta});
      CountTable table;
      if (!counts_in.empty()) {
        std::ifstream in(counts_in);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + counts_in);
        table = read_count_table(in);
      } else {
        table = simulate_counts(truth, standard_settings(config.settings), config.exposure, config.seed);
        std::ostringstream out;
        write_count_table(out, table);
        if (!config.output_path.empty()) app::write_file_atomic(config.output_path, out.str());
      }
      const ReconstructionResult res = method == "mle" ? mle_reconstruct(table) : linear_reconstruct(table);
      std::cout << "settings: " << table.settings.size() << ", exposure: " << table.exposure
                << ", seed: " << table.seed << '\n';
      std::cout << "method: " << method << ", physical: " << (res.physical ? "yes" : "no")
                << ", converged: " << (res.converged ? "yes" : "no") << ", iterations: " << res.iterations
                << '\n';
      if (res.physical)
        std::cout << "fidelity to rho_AB(p=" << tomo_p << ", theta=" << tomo_theta
                  << "): " << csv::number(fidelity(res.density(), truth)) << '\n';
      std::cout << "real part:\n" << res.estimate.real() << "\nimaginary part:\n" << res.estimate.imag() << '\n';
      if (!recon_out.empty()) {
        std::ostringstream out;
        write_reconstruction(out, res);
        app::write_file_atomic(recon_out, out.str());
      }
      return 0;
    }

    if (fuzz->parsed()) {
      const app::SweepConfig config = fuzz_flags.resolve();
      app::FuzzOptions opts;
      opts.n = fuzz_n;
      opts.seed = config.seed;
      opts.variant = config.delta_variant;
      opts.include_anchors = !no_anchors;
      opts.purification_dims.clear();
      for (double k : app::parse_number_list(fuzz_k)) {
        if (k < 1 || k != std::floor(k)) throw Error(ErrorCode::InvalidConfig, "--k entries must be positive integers");
        opts.purification_dims.push_back(static_cast<int>(k));
      }
      const app::FuzzSummary summary = app::bound_fuzz(opts);
      const std::string text = app::format_fuzz(summary);
      std::cout << text;
      if (!config.output_path.empty()) app::write_file_atomic(config.output_path, text);
      return summary.exit_code();
    }

    if (plot->parsed()) {
      app::plot(plot_in, plot_out);
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e);
  }
  return kUsage;
}
