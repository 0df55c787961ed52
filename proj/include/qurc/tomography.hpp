#pragma once

// Simulated two-qubit polarization tomography: Poissonian coincidence counts
// over product measurement settings, linear inversion, maximum-likelihood
// reconstruction, fidelity and Monte Carlo error bars.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qurc/infotheory.hpp"
#include "qurc/qla.hpp"
#include "qurc/states.hpp"

namespace qurc {

struct TomographySetting {
  Polarization a;
  Polarization b;

  PureState basis_a() const { return polarization_ket(a); }
  PureState basis_b() const { return polarization_ket(b); }
  std::string label() const { return {polarization_label(a), polarization_label(b)}; }
  /// |a><a| (x) |b><b|
  ComplexMatrix projector() const;
};

enum class SettingsMode { Sixteen, ThirtySix };

/// ThirtySix: {H,V,D,A,R,L} x {H,V,D,A,R,L}. Sixteen: {H,V,D,R} x {H,V,D,R}.
/// Photon A varies slowest.
std::vector<TomographySetting> standard_settings(SettingsMode mode);

struct CountTable {
  std::vector<TomographySetting> settings;
  std::vector<std::int64_t> counts;
  double exposure = 0.0;  // expected pairs per setting
  std::uint64_t seed = 0;

  std::vector<double> counts_as_double() const { return {counts.begin(), counts.end()}; }
};

/// exposure * Tr[(P_a (x) P_b) rho] per setting.
std::vector<double> expected_counts(const DensityMatrix& rho,
                                    std::span<const TomographySetting> settings, double exposure);

/// Poisson(expected count) per setting; deterministic in the seed.
CountTable simulate_counts(const DensityMatrix& rho, std::span<const TomographySetting> settings,
                           double exposure, std::uint64_t seed);

enum class ReconstructionMethod { Linear, Mle };

struct ReconstructionResult {
  ComplexMatrix estimate;  // unit trace; possibly non-PSD for linear inversion
  ReconstructionMethod method = ReconstructionMethod::Linear;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = true;
  bool physical = false;

  /// Validated state; throws for non-physical linear estimates.
  DensityMatrix density() const { return validate_density(estimate, {2, 2}); }
};

/// Least-squares fit of rho = 1/4 sum_ij S_ij sigma_i (x) sigma_j to the
/// observed frequencies counts / exposure, normalized to unit trace.
ReconstructionResult linear_reconstruct(std::span<const TomographySetting> settings,
                                        std::span<const double> counts, double exposure);
ReconstructionResult linear_reconstruct(const CountTable& table);

/// Poisson log-likelihood of a state parameterized by an upper-triangular
/// factor T: rho = T^H T / Tr(T^H T). Parameters: D real diagonal entries,
/// then (Re, Im) of each strictly-upper entry in row-major order.
class PoissonLikelihood {
 public:
  PoissonLikelihood(std::span<const TomographySetting> settings, std::span<const double> counts,
                    double exposure);

  Eigen::Index num_params() const { return dim_ * dim_; }
  double value(const Eigen::VectorXd& params) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& params) const;
  double value_of_state(const ComplexMatrix& rho) const;

  ComplexMatrix factor(const Eigen::VectorXd& params) const;
  ComplexMatrix state(const Eigen::VectorXd& params) const;
  /// Parameters whose state equals rho (rho must be positive definite).
  Eigen::VectorXd params_from_state(const ComplexMatrix& rho) const;

 private:
  Eigen::Index dim_ = 4;
  std::vector<ComplexMatrix> projectors_;
  std::vector<double> counts_;
  double exposure_;
};

struct MleOptions {
  int max_iterations = 10000;
  double improvement_tol = 1e-10;
  double gradient_tol = 1e-8;
};

/// BFGS ascent with backtracking on the Poisson likelihood. Starts from
/// `init` or, when absent, from the linear estimate pulled into the interior.
/// Hitting the iteration cap returns the best iterate with converged = false.
ReconstructionResult mle_reconstruct(std::span<const TomographySetting> settings,
                                     std::span<const double> counts, double exposure,
                                     const std::optional<DensityMatrix>& init = std::nullopt,
                                     const MleOptions& options = {});
ReconstructionResult mle_reconstruct(const CountTable& table,
                                     const std::optional<DensityMatrix>& init = std::nullopt,
                                     const MleOptions& options = {});

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) (not squared).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct ErrorBarReport {
  std::vector<std::string> quantity_names;
  std::vector<double> means;
  std::vector<double> std_devs;
  int n_samples = 0;  // samples entering the statistics
  int n_failed = 0;   // samples dropped for NoConvergence

  double mean(std::string_view name) const;
  double std_dev(std::string_view name) const;
};

struct MonteCarloOptions {
  std::vector<ProjectiveMeasurement> measurements = mub_qubit();
  DeltaVariant delta_variant = DeltaVariant::Consistent;
  unsigned threads = 0;
  MleOptions mle;
};

/// Repeats simulate -> MLE -> report per sample with seeds derived from
/// (seed, sample index). Selectable quantities are "fidelity" and every
/// UncertaintyReport scalar field.
ErrorBarReport monte_carlo_errors(const DensityMatrix& rho_true,
                                  std::span<const TomographySetting> settings, double exposure,
                                  int n_samples, std::uint64_t seed,
                                  const std::vector<std::string>& quantities,
                                  const MonteCarloOptions& options = {});

// CSV columns: setting_label,basis_a,basis_b,count,exposure,seed
void write_count_table(std::ostream& out, const CountTable& table);
CountTable read_count_table(std::istream& in);

// One line of 16 "re,im" pairs (32 values), row-major, after a header line.
void write_reconstruction(std::ostream& out, const ReconstructionResult& result);
ComplexMatrix read_reconstruction(std::istream& in);

}  // namespace qurc
