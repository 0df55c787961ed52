#include "qurc/infotheory.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace qurc {

double entropy_of_eigenvalues(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues)
    if (lambda >= tol::kZeroEntropy) s -= lambda * std::log2(lambda);
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_eigenvalues(spectrum(rho).eigenvalues);
}

double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12)) throw Error(ErrorCode::NotAProbabilityVector, "negative entry");
    total += x;
  }
  if (p.empty() || std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorCode::NotAProbabilityVector, "entries sum to " + std::to_string(total));
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return std::max(h, 0.0);
}

namespace {

void require_bipartite(const DensityMatrix& rho) {
  if (!rho.is_bipartite())
    throw Error(ErrorCode::DimensionMismatch, "state must have exactly two subsystems");
}

}  // namespace

double conditional_entropy(const DensityMatrix& rho_ab) {
  require_bipartite(rho_ab);
  return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, 1));
}

double mutual_information(const DensityMatrix& rho_ab) {
  require_bipartite(rho_ab);
  return von_neumann_entropy(partial_trace(rho_ab, 0)) +
         von_neumann_entropy(partial_trace(rho_ab, 1)) - von_neumann_entropy(rho_ab);
}

double holevo_quantity(const MeasurementOutcomeEnsemble& ens, const DensityMatrix& rho_b) {
  double avg = 0.0;
  for (std::size_t i = 0; i < ens.probabilities.size(); ++i)
    if (!ens.is_zero_probability(i))
      avg += ens.probabilities[i] * von_neumann_entropy(*ens.conditional_memory[i]);
  return von_neumann_entropy(rho_b) - avg;
}

double relative_entropy_coherence(const DensityMatrix& rho, const ComplexMatrix& basis) {
  return von_neumann_entropy(dephase_global(rho, basis)) - von_neumann_entropy(rho);
}

double unilateral_coherence(const DensityMatrix& rho_ab, const ProjectiveMeasurement& m) {
  return von_neumann_entropy(measure_local(rho_ab, m).dephased_joint) -
         von_neumann_entropy(rho_ab);
}

namespace {

void require_common_dim(const std::vector<ProjectiveMeasurement>& ms) {
  if (ms.size() < 2) throw Error(ErrorCode::DimensionMismatch, "need at least two measurements");
  for (const auto& m : ms)
    if (m.dim() != ms.front().dim())
      throw Error(ErrorCode::DimensionMismatch, "measurements differ in dimension");
}

// overlaps(i, j) = |<u_i|v_j>|^2
Eigen::MatrixXd overlaps(const ProjectiveMeasurement& u, const ProjectiveMeasurement& v) {
  return (u.basis().adjoint() * v.basis()).cwiseAbs2();
}

}  // namespace

OverlapFactors overlap_factor_b(const std::vector<ProjectiveMeasurement>& measurements) {
  require_common_dim(measurements);
  const std::size_t n = measurements.size();
  const Eigen::Index d = measurements.front().dim();

  std::vector<Eigen::MatrixXd> link;  // link[m] couples measurement m and m+1
  for (std::size_t m = 0; m + 1 < n; ++m)
    link.push_back(overlaps(measurements[m], measurements[m + 1]));

  OverlapFactors out;
  out.c = link[0].maxCoeff();
  if (n == 2) {
    out.b = out.c;
    return out;
  }

  // best_first(i2) = max_{i1} c(u^1_{i1}, u^2_{i2})
  const Eigen::VectorXd best_first = link[0].colwise().maxCoeff().transpose();

  double b = 0.0;
  std::vector<Eigen::Index> idx(n - 2, 0);  // i_2 .. i_{N-1}
  for (Eigen::Index last = 0; last < d; ++last) {
    double sum = 0.0;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      double term = best_first[idx[0]];
      for (std::size_t m = 1; m + 1 < n; ++m) {
        const Eigen::Index next = (m + 1 < n - 1) ? idx[m] : last;
        term *= link[m](idx[m - 1], next);
      }
      sum += term;
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == d) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    b = std::max(b, sum);
  }
  out.b = b;
  return out;
}

bool is_complete_mub_set(const std::vector<ProjectiveMeasurement>& measurements) {
  if (measurements.size() < 2) return false;
  const Eigen::Index d = measurements.front().dim();
  if (static_cast<Eigen::Index>(measurements.size()) != d + 1) return false;
  for (const auto& m : measurements)
    if (m.dim() != d) return false;
  for (std::size_t i = 0; i < measurements.size(); ++i)
    for (std::size_t j = i + 1; j < measurements.size(); ++j) {
      const Eigen::MatrixXd o = overlaps(measurements[i], measurements[j]);
      if ((o.array() - 1.0 / static_cast<double>(d)).abs().maxCoeff() > 1e-9) return false;
    }
  return true;
}

std::string_view to_string(DeltaVariant v) {
  return v == DeltaVariant::Consistent ? "consistent" : "as-printed";
}

DeltaVariant delta_variant_from_string(std::string_view s) {
  if (s == "consistent") return DeltaVariant::Consistent;
  if (s == "as-printed" || s == "as_printed") return DeltaVariant::AsPrinted;
  throw Error(ErrorCode::InvalidConfig, "unknown delta variant '" + std::string(s) + "'");
}

double UncertaintyReport::worst_margin() const {
  return std::min({elhs - erhs1, elhs - erhs2, clhs - crhs1, clhs - crhs2});
}

const std::vector<std::string>& UncertaintyReport::scalar_fields() {
  static const std::vector<std::string> names = {
      "elhs", "erhs1", "erhs2", "clhs", "crhs1",       "crhs2", "s_ab",
      "s_a",  "s_b",   "s_a_given_b",   "i_ab", "delta", "log_overlap"};
  return names;
}

double UncertaintyReport::field(std::string_view name) const {
  if (name == "elhs") return elhs;
  if (name == "erhs1") return erhs1;
  if (name == "erhs2") return erhs2;
  if (name == "clhs") return clhs;
  if (name == "crhs1") return crhs1;
  if (name == "crhs2") return crhs2;
  if (name == "s_ab") return s_ab;
  if (name == "s_a") return s_a;
  if (name == "s_b") return s_b;
  if (name == "s_a_given_b") return s_a_given_b;
  if (name == "i_ab") return i_ab;
  if (name == "delta") return delta;
  if (name == "log_overlap") return log_overlap;
  throw Error(ErrorCode::InvalidConfig, "unknown report field '" + std::string(name) + "'");
}

UncertaintyReport uncertainty_report(const DensityMatrix& rho_ab,
                                     const std::vector<ProjectiveMeasurement>& measurements,
                                     DeltaVariant variant) {
  require_bipartite(rho_ab);
  require_common_dim(measurements);
  const int d = rho_ab.dims()[0];
  if (measurements.front().dim() != d)
    throw Error(ErrorCode::DimensionMismatch, "measurements must act on subsystem A");
  const auto n = static_cast<double>(measurements.size());

  UncertaintyReport r;
  r.delta_variant = variant;
  const DensityMatrix rho_a = partial_trace(rho_ab, 0);
  const DensityMatrix rho_b = partial_trace(rho_ab, 1);
  r.s_ab = von_neumann_entropy(rho_ab);
  r.s_a = von_neumann_entropy(rho_a);
  r.s_b = von_neumann_entropy(rho_b);
  r.s_a_given_b = r.s_ab - r.s_b;
  r.i_ab = r.s_a + r.s_b - r.s_ab;

  double holevo_sum = 0.0;
  for (const auto& m : measurements) {
    const MeasurementOutcomeEnsemble ens = measure_local(rho_ab, m);
    const double s_mb = von_neumann_entropy(ens.dephased_joint);
    r.labels.push_back(m.label());
    r.conditional_entropies.push_back(s_mb - r.s_b);
    r.coherences.push_back(s_mb - r.s_ab);
    r.holevo.push_back(holevo_quantity(ens, rho_b));
    r.elhs += r.conditional_entropies.back();
    r.clhs += r.coherences.back();
    holevo_sum += r.holevo.back();
  }

  const OverlapFactors of = overlap_factor_b(measurements);
  r.log_overlap = of.log_inv_b();
  r.complete_mub = is_complete_mub_set(measurements);
  if (r.complete_mub) {
    const double log_d = std::log2(static_cast<double>(d));
    r.erhs1 = log_d + d * r.s_a_given_b;
    r.crhs1 = log_d - r.s_a_given_b;
  } else {
    r.erhs1 = r.log_overlap + (n - 1.0) * r.s_a_given_b;
    r.crhs1 = r.log_overlap - r.s_a_given_b;
  }

  const double weight = variant == DeltaVariant::Consistent ? n - 1.0 : n;
  r.delta = weight * r.i_ab - holevo_sum;
  const double lift = std::max(0.0, r.delta);
  r.erhs2 = r.erhs1 + lift;
  r.crhs2 = r.crhs1 + lift;
  return r;
}

UncertaintyReport eur_report(const DensityMatrix& rho_ab,
                             const std::vector<ProjectiveMeasurement>& measurements,
                             DeltaVariant variant) {
  return uncertainty_report(rho_ab, measurements, variant);
}

UncertaintyReport cur_report(const DensityMatrix& rho_ab,
                             const std::vector<ProjectiveMeasurement>& measurements,
                             DeltaVariant variant) {
  return uncertainty_report(rho_ab, measurements, variant);
}

}  // namespace qurc
