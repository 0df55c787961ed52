#pragma once

#include <array>
#include <string>
#include <vector>

#include "qurc/qla.hpp"

namespace qurc {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Unit-norm ket.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const noexcept { return amp_; }
  Eigen::Index dim() const noexcept { return amp_.size(); }
  ComplexMatrix projector() const { return outer<double>(amp_); }

 private:
  ComplexVector amp_;
};

/// Single-qubit polarization kets. R = (H + iV)/sqrt2, L = (H - iV)/sqrt2.
enum class Polarization { H, V, D, A, R, L };

PureState polarization_ket(Polarization pol);
char polarization_label(Polarization pol);
Polarization polarization_from_label(char c);

/// Mixing weight p and preparation angle theta (degrees at the boundary).
struct StateParams {
  double p = 1.0;
  double theta_deg = 45.0;
};

enum class BellLike { Phi, Psi };

/// Phi_theta = cos(theta)|HH> + sin(theta)|VV>,
/// Psi_theta = cos(theta)|HV> - sin(theta)|VH>. theta in [0, 90] degrees.
PureState bell_like_state(double theta_deg, BellLike which);

/// p |Phi_theta><Phi_theta| + (1 - p) |Psi_theta><Psi_theta| on dims {2, 2}.
DensityMatrix bell_diagonal_state(const StateParams& params);

/// Ordered set of rank-1 orthonormal projectors acting on one subsystem.
class ProjectiveMeasurement {
 public:
  /// Columns of `basis` are the measurement kets, in outcome order.
  ProjectiveMeasurement(std::string label, const ComplexMatrix& basis);

  const std::string& label() const noexcept { return label_; }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  Eigen::Index dim() const noexcept { return basis_.rows(); }
  std::size_t outcomes() const noexcept { return projectors_.size(); }

 private:
  std::string label_;
  ComplexMatrix basis_;
  std::vector<ComplexMatrix> projectors_;
};

/// Qubit MUB set in the fixed order M_x {D, A}, M_y {R, L}, M_z {H, V}.
std::vector<ProjectiveMeasurement> mub_qubit();

enum class PlateKind { Half, Quarter };

struct WavePlate {
  PlateKind kind = PlateKind::Half;
  double axis_deg = 0.0;
};

/// Jones matrix in the {H, V} basis.
///   HWP(a) = [[cos 2a, sin 2a], [sin 2a, -cos 2a]]
///   QWP(a) = R(-a) diag(1, i) R(a),  R(a) = [[cos a, sin a], [-sin a, cos a]]
ComplexMatrix jones_matrix(const WavePlate& plate);

/// Projector selected by the PBS transmit port after the plates:
/// U^H |H><H| U with U = J(second) J(first).
ComplexMatrix projector_from_plates(const WavePlate& first, const WavePlate& second);

/// Projector selected by a single plate in front of the PBS.
ComplexMatrix projector_from_plate(const WavePlate& plate);

/// One row of the wave-plate table for the local MUB measurement on photon A.
struct PlateSetting {
  std::string measurement;  // "x0", "x1", "y0", ...
  std::size_t basis;        // index into mub_qubit()
  std::size_t outcome;
  WavePlate p1;
  WavePlate p2;
};

std::vector<PlateSetting> mub_plate_table();

}  // namespace qurc
