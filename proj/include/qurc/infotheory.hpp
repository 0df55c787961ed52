#pragma once

// Entropies, coherence measures and the multi-measurement entropic (EUR) and
// coherence (CUR) uncertainty relations with their Holevo-strengthened
// bounds. Every quantity is in bits.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qurc/measurement.hpp"
#include "qurc/qla.hpp"
#include "qurc/states.hpp"

namespace qurc {

double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_eigenvalues(const RealVector& eigenvalues);
double shannon_entropy(std::span<const double> p);
inline double binary_entropy(double p) {
  const double q[] = {p, 1.0 - p};
  return shannon_entropy(q);
}

/// S(A|B) = S(rho_AB) - S(rho_B).
double conditional_entropy(const DensityMatrix& rho_ab);
/// I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB).
double mutual_information(const DensityMatrix& rho_ab);
/// I(M:B) = S(rho_B) - sum_i p_i S(rho_{B|i}).
double holevo_quantity(const MeasurementOutcomeEnsemble& ens, const DensityMatrix& rho_b);

/// S(rho_diag) - S(rho) with rho_diag the dephasing in `basis` (columns).
double relative_entropy_coherence(const DensityMatrix& rho, const ComplexMatrix& basis);
/// S(rho_MB) - S(rho_AB) for a measurement on subsystem A.
double unilateral_coherence(const DensityMatrix& rho_ab, const ProjectiveMeasurement& m);

struct OverlapFactors {
  double b = 1.0;  // nested max/sum overlap over all measurements, in order
  double c = 1.0;  // max |<u^1_i|u^2_j>|^2 of the first two measurements
  double log_inv_b() const { return std::log2(1.0 / b); }
  double log_inv_c() const { return std::log2(1.0 / c); }
};

/// Exhaustive evaluation of
///   b = max_{i_N} sum_{i_2..i_{N-1}} max_{i_1} c(u^1_{i_1}, u^2_{i_2})
///         * prod_{m=2}^{N-1} c(u^m_{i_m}, u^{m+1}_{i_{m+1}}),
/// which reduces to the pairwise maximum overlap c for N = 2.
OverlapFactors overlap_factor_b(const std::vector<ProjectiveMeasurement>& measurements);

/// True for d + 1 bases of dimension d that are pairwise unbiased within 1e-9.
bool is_complete_mub_set(const std::vector<ProjectiveMeasurement>& measurements);

/// How the Holevo correction delta is formed for N measurements.
///   consistent: (N - 1) I(A:B) - sum_m I(M_m:B)   (d I(A:B) - ... for d+1 MUBs)
///   as_printed: N I(A:B) - sum_m I(M_m:B)         ((d+1) I(A:B) - ... for d+1 MUBs)
enum class DeltaVariant { Consistent, AsPrinted };

std::string_view to_string(DeltaVariant v);
DeltaVariant delta_variant_from_string(std::string_view s);

struct UncertaintyReport {
  std::vector<std::string> labels;
  std::vector<double> conditional_entropies;  // S(M_m|B)
  std::vector<double> coherences;             // C^{M_m}_re(rho_AB)
  std::vector<double> holevo;                 // I(M_m:B)
  double elhs = 0, erhs1 = 0, erhs2 = 0;
  double clhs = 0, crhs1 = 0, crhs2 = 0;
  double s_ab = 0, s_a = 0, s_b = 0, s_a_given_b = 0, i_ab = 0;
  double delta = 0;
  DeltaVariant delta_variant = DeltaVariant::Consistent;
  double log_overlap = 0;  // log2(1/b)
  bool complete_mub = false;

  /// Smallest of elhs - erhs1, elhs - erhs2, clhs - crhs1, clhs - crhs2.
  double worst_margin() const;
  /// Looks a scalar field up by name ("elhs", "s_a_given_b", ...).
  double field(std::string_view name) const;
  static const std::vector<std::string>& scalar_fields();
};

/// Fills every field of the report: the entropic side (ELHS, ERHS1, ERHS2)
/// and the coherence side (CLHS, CRHS1, CRHS2) share their constituents.
UncertaintyReport uncertainty_report(const DensityMatrix& rho_ab,
                                     const std::vector<ProjectiveMeasurement>& measurements,
                                     DeltaVariant variant = DeltaVariant::Consistent);

/// Entropic relation report. Same content as uncertainty_report.
UncertaintyReport eur_report(const DensityMatrix& rho_ab,
                             const std::vector<ProjectiveMeasurement>& measurements,
                             DeltaVariant variant = DeltaVariant::Consistent);
/// Coherence relation report. Same content as uncertainty_report.
UncertaintyReport cur_report(const DensityMatrix& rho_ab,
                             const std::vector<ProjectiveMeasurement>& measurements,
                             DeltaVariant variant = DeltaVariant::Consistent);

}  // namespace qurc
