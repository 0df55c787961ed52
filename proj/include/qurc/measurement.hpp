#pragma once

#include <optional>
#include <vector>

#include "qurc/qla.hpp"
#include "qurc/states.hpp"

namespace qurc {

inline constexpr double kZeroProbability = 1e-12;

/// Result of a rank-1 projective measurement on subsystem A of rho_AB.
///
/// Outcomes with probability below 1e-12 carry no conditional states; the
/// 0 * S(.) = 0 convention applies to them downstream.
struct MeasurementOutcomeEnsemble {
  std::vector<double> probabilities;
  std::vector<std::optional<DensityMatrix>> conditional_joint;   // rho^i_AB
  std::vector<std::optional<DensityMatrix>> conditional_memory;  // rho_{B|i}
  DensityMatrix dephased_joint;                                  // rho_MB

  bool is_zero_probability(std::size_t i) const { return !conditional_memory[i].has_value(); }
};

MeasurementOutcomeEnsemble measure_local(const DensityMatrix& rho_ab,
                                         const ProjectiveMeasurement& m);

/// Populations of rho in the orthonormal columns of `basis`, returned as
/// sum_i <i|rho|i> |i><i| in the original frame.
DensityMatrix dephase_global(const DensityMatrix& rho, const ComplexMatrix& basis);

}  // namespace qurc
