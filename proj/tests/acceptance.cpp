// Acceptance gate: one PASS/FAIL line per criterion, tolerances as pinned.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qurc/app.hpp"
#include "qurc/random.hpp"
#include "qurc/tomography.hpp"

using namespace qurc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0 || dt < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (budget_s > 0)
    std::snprintf(timing, sizeof timing, "%.3fs (budget %gs)", dt, budget_s);
  else
    std::snprintf(timing, sizeof timing, "%.3fs", dt);
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << " | " << o.detail << " | "
            << timing << std::endl;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Reports gathered in criteria 1-3, re-used by criterion 5.
std::vector<UncertaintyReport> evaluated;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const auto mubs = mub_qubit();

  criterion(1, "endpoint values ELHS=0, CLHS=3 at theta=45, p in {0,1}", 1.0, [&] {
    double worst = 0;
    for (double p : {0.0, 1.0}) {
      const UncertaintyReport r = uncertainty_report(bell_diagonal_state({p, 45.0}), mubs);
      evaluated.push_back(r);
      worst = std::max({worst, std::abs(r.elhs), std::abs(r.clhs - 3.0)});
    }
    return Outcome{worst <= 1e-9, "max deviation " + fmt(worst)};
  });

  criterion(2, "bound fuzz: 1e4 random states, consistent delta, zero violations", 60.0, [&] {
    Rng rng(20240611);
    const int ks[] = {1, 2, 4};
    int violations = 0;
    double worst = INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const UncertaintyReport r = uncertainty_report(random_mixed_state(2, 2, ks[i % 3], rng), mubs);
      evaluated.push_back(r);
      const double m = r.worst_margin();
      worst = std::min(worst, m);
      if (m < -1e-9) ++violations;
    }
    return Outcome{violations == 0, std::to_string(violations) + " violations, worst margin " + fmt(worst)};
  });

  criterion(3, "tightness at theta=45: ERHS2=ELHS and CRHS2=CLHS for p=0..1", 0, [&] {
    double worst = 0;
    for (int k = 0; k <= 10; ++k) {
      const UncertaintyReport r = uncertainty_report(bell_diagonal_state({k / 10.0, 45.0}), mubs);
      evaluated.push_back(r);
      worst = std::max({worst, std::abs(r.erhs2 - r.elhs), std::abs(r.crhs2 - r.clhs)});
    }
    return Outcome{worst <= 1e-9, "max gap " + fmt(worst)};
  });

  criterion(4, "printed delta: rho(1,45) gives ERHS2=2 > ELHS=0, fuzz flags it", 0, [&] {
    const UncertaintyReport r =
        uncertainty_report(bell_diagonal_state({1.0, 45.0}), mubs, DeltaVariant::AsPrinted);
    app::FuzzOptions o;
    o.n = 1;
    o.variant = DeltaVariant::AsPrinted;
    const app::FuzzSummary s = app::bound_fuzz(o);
    const std::string text = app::format_fuzz(s);
    const bool values = std::abs(r.erhs2 - 2.0) <= 1e-9 && std::abs(r.elhs) <= 1e-9;
    const bool flagged = s.anchor_violations > 0 && text.find("variant inconsistency") != std::string::npos &&
                         s.worst_origin == "rho(p=1,theta=45)" && s.exit_code() == 0;
    return Outcome{values && flagged, "ERHS2=" + fmt(r.erhs2) + " ELHS=" + fmt(r.elhs) +
                                          ", fuzz worst margin " + fmt(s.worst_margin) + " on " +
                                          s.worst_origin};
  });

  criterion(5, "identity ELHS - CLHS = 3 S(A|B) on every state of criteria 1-3", 0, [&] {
    double worst = 0;
    for (const auto& r : evaluated) worst = std::max(worst, std::abs(r.elhs - r.clhs - 3.0 * r.s_a_given_b));
    return Outcome{!evaluated.empty() && worst <= 1e-9,
                   std::to_string(evaluated.size()) + " states, max residual " + fmt(worst)};
  });

  criterion(6, "anti-correlation of ELHS and CLHS over the theta grid at p=1", 0, [&] {
    const auto grid = app::standard_theta_grid();
    std::vector<double> e, c;
    for (double t : grid) {
      const UncertaintyReport r = uncertainty_report(bell_diagonal_state({1.0, t}), mubs);
      e.push_back(r.elhs);
      c.push_back(r.clhs);
    }
    constexpr double slack = 1e-12;
    bool ok = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i] <= 45.0) ok = ok && e[i] <= e[i - 1] + slack && c[i] >= c[i - 1] - slack;
      else ok = ok && e[i] >= e[i - 1] - slack && c[i] <= c[i - 1] + slack;
    }
    return Outcome{ok, "ELHS " + fmt(e.front()) + " -> " + fmt(e[5]) + " -> " + fmt(e.back()) + ", CLHS " +
                           fmt(c.front()) + " -> " + fmt(c[5]) + " -> " + fmt(c.back())};
  });

  criterion(7, "MLE fidelity, 36 settings, exposure 1e4, 100 samples, rho1-rho4", 300.0, [&] {
    const auto settings = standard_settings(SettingsMode::ThirtySix);
    const std::pair<double, double> families[] = {{1, 30}, {0, 30}, {1, 45}, {0, 45}};
    bool ok = true;
    std::string detail;
    int k = 1;
    for (auto [p, theta] : families) {
      const ErrorBarReport r =
          monte_carlo_errors(bell_diagonal_state({p, theta}), settings, 1e4, 100, 2024 + k, {"fidelity"});
      const double m = r.mean("fidelity"), s = r.std_dev("fidelity");
      ok = ok && m >= 0.995 && s < 0.01 && r.n_samples == 100;
      if (!detail.empty()) detail += "; ";
      char buf[96];
      std::snprintf(buf, sizeof buf, "rho%d %.5f+-%.5f (n=%d)", k, m, s, r.n_samples);
      detail += buf;
      ++k;
    }
    return Outcome{ok, detail};
  });

  criterion(8, "noiseless linear inversion of 1000 random states", 0, [&] {
    const auto settings = standard_settings(SettingsMode::ThirtySix);
    Rng rng(8);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const DensityMatrix rho = random_mixed_state(2, 2, 1 + i % 4, rng);
      const auto freq = expected_counts(rho, settings, 1.0);
      const ComplexMatrix est = linear_reconstruct(settings, freq, 1.0).estimate;
      worst = std::max(worst, (est - rho.matrix()).cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 1e-9, "max entry error " + fmt(worst)};
  });

  criterion(9, "eigensolver on 1000 Hermitian 4x4; MLE gradient vs central differences", 0, [&] {
    Rng rng(9);
    double recon = 0, unit = 0;
    for (int i = 0; i < 1000; ++i) {
      const ComplexMatrix h = random_hermitian(4, rng);
      const Spectrum<double> sp = eig_hermitian<double>(h);
      recon = std::max(recon, (sp.reconstruct() - h).cwiseAbs().maxCoeff());
      unit = std::max(unit, (sp.eigenvectors.adjoint() * sp.eigenvectors - ComplexMatrix::Identity(4, 4))
                                .cwiseAbs()
                                .maxCoeff());
    }
    const auto settings = standard_settings(SettingsMode::ThirtySix);
    const auto counts = simulate_counts(bell_diagonal_state({0.7, 25.0}), settings, 1e4, 9).counts_as_double();
    const PoissonLikelihood model(settings, counts, 1e4);
    double grad_err = 0;
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd x(model.num_params());
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = rng.normal();
      const Eigen::VectorXd g = model.gradient(x);
      Eigen::VectorXd fd(x.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(x[j]));
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        fd[j] = (model.value(xp) - model.value(xm)) / (2 * step);
      }
      grad_err = std::max(grad_err, (g - fd).norm() / fd.norm());
    }
    return Outcome{recon <= 1e-9 && unit <= 1e-9 && grad_err <= 1e-5,
                   "reconstruction " + fmt(recon) + ", unitarity " + fmt(unit) + ", gradient rel. err " +
                       fmt(grad_err)};
  });

  criterion(10, "repeated qurc sweep runs with one seed give byte-identical CSV", 0, [&] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qurc_acceptance";
    fs::create_directories(dir);
    const std::string exe = QURC_CLI_PATH;
    const std::vector<std::string> variants = {
        "--kind theta --seed 7",
        "--kind p --pipeline tomographic --mc-samples 4 --grid 0,0.5,1 --seed 7",
    };
    bool ok = true;
    std::string detail;
    for (std::size_t v = 0; v < variants.size(); ++v) {
      std::string bytes[2];
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("run" + std::to_string(v) + "_" + std::to_string(run) + ".csv");
        const std::string cmd = "\"" + exe + "\" sweep " + variants[v] + " --output \"" + out.string() + "\" 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) return Outcome{false, "command failed: " + cmd};
        bytes[run] = read_file(out);
      }
      const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
      ok = ok && same;
      if (!detail.empty()) detail += "; ";
      detail += (v == 0 ? "analytic " : "tomographic ") + std::to_string(bytes[0].size()) + " bytes " +
                (same ? "identical" : "DIFFER");
    }
    fs::remove_all(dir);
    return Outcome{ok, detail};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures;
}
