#include "qurc/states.hpp"

#include <string>

namespace qurc {

namespace {

using C = std::complex<double>;

ComplexVector ket2(C a, C b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

ComplexMatrix rotation(double a) {
  ComplexMatrix r(2, 2);
  r << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
  return r;
}

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw Error(ErrorCode::DimensionMismatch, "empty ket");
  const double n = amp_.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw Error(ErrorCode::TraceMismatch, "ket norm " + std::to_string(n));
}

PureState polarization_ket(Polarization pol) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (pol) {
    case Polarization::H: return PureState(ket2(1.0, 0.0));
    case Polarization::V: return PureState(ket2(0.0, 1.0));
    case Polarization::D: return PureState(ket2(s, s));
    case Polarization::A: return PureState(ket2(s, -s));
    case Polarization::R: return PureState(ket2(s, C(0.0, s)));
    case Polarization::L: return PureState(ket2(s, C(0.0, -s)));
  }
  throw Error(ErrorCode::InvalidConfig, "unknown polarization");
}

char polarization_label(Polarization pol) {
  constexpr char labels[] = {'H', 'V', 'D', 'A', 'R', 'L'};
  return labels[static_cast<int>(pol)];
}

Polarization polarization_from_label(char c) {
  switch (c) {
    case 'H': return Polarization::H;
    case 'V': return Polarization::V;
    case 'D': return Polarization::D;
    case 'A': return Polarization::A;
    case 'R': return Polarization::R;
    case 'L': return Polarization::L;
    default: break;
  }
  throw Error(ErrorCode::MalformedCsv, std::string("unknown polarization label '") + c + "'");
}

PureState bell_like_state(double theta_deg, BellLike which) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
    throw Error(ErrorCode::AngleOutOfRange, "theta " + std::to_string(theta_deg) + " deg");
  const double t = deg_to_rad(theta_deg);
  ComplexVector v = ComplexVector::Zero(4);
  if (which == BellLike::Phi) {
    v[0] = std::cos(t);
    v[3] = std::sin(t);
  } else {
    v[1] = std::cos(t);
    v[2] = -std::sin(t);
  }
  return PureState(v);
}

DensityMatrix bell_diagonal_state(const StateParams& params) {
  if (!(params.p >= 0.0 && params.p <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "p " + std::to_string(params.p) + " outside [0,1]");
  const PureState phi = bell_like_state(params.theta_deg, BellLike::Phi);
  const PureState psi = bell_like_state(params.theta_deg, BellLike::Psi);
  const ComplexMatrix m = params.p * phi.projector() + (1.0 - params.p) * psi.projector();
  return validate_density(m, {2, 2});
}

ProjectiveMeasurement::ProjectiveMeasurement(std::string label, const ComplexMatrix& basis)
    : label_(std::move(label)), basis_(basis) {
  if (basis_.rows() == 0 || basis_.rows() != basis_.cols())
    throw Error(ErrorCode::DimensionMismatch, "measurement basis must be a square matrix");
  const ComplexMatrix gram = basis_.adjoint() * basis_;
  const double defect = max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols()));
  if (defect > 1e-9)
    throw Error(ErrorCode::DimensionMismatch,
                "measurement kets not orthonormal (defect " + std::to_string(defect) + ")");
  projectors_.reserve(static_cast<std::size_t>(basis_.cols()));
  for (Eigen::Index k = 0; k < basis_.cols(); ++k)
    projectors_.push_back(outer<double>(ComplexVector(basis_.col(k))));
}

std::vector<ProjectiveMeasurement> mub_qubit() {
  auto basis = [](Polarization a, Polarization b) {
    ComplexMatrix m(2, 2);
    m.col(0) = polarization_ket(a).amplitudes();
    m.col(1) = polarization_ket(b).amplitudes();
    return m;
  };
  return {ProjectiveMeasurement("x", basis(Polarization::D, Polarization::A)),
          ProjectiveMeasurement("y", basis(Polarization::R, Polarization::L)),
          ProjectiveMeasurement("z", basis(Polarization::H, Polarization::V))};
}

ComplexMatrix jones_matrix(const WavePlate& plate) {
  const double a = deg_to_rad(plate.axis_deg);
  if (plate.kind == PlateKind::Half) {
    ComplexMatrix j(2, 2);
    j << std::cos(2 * a), std::sin(2 * a), std::sin(2 * a), -std::cos(2 * a);
    return j;
  }
  ComplexMatrix retarder = ComplexMatrix::Zero(2, 2);
  retarder(0, 0) = 1.0;
  retarder(1, 1) = C(0.0, 1.0);
  return rotation(-a) * retarder * rotation(a);
}

ComplexMatrix projector_from_plates(const WavePlate& first, const WavePlate& second) {
  const ComplexMatrix u = jones_matrix(second) * jones_matrix(first);
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  return u.adjoint() * h * u;
}

ComplexMatrix projector_from_plate(const WavePlate& plate) {
  const ComplexMatrix u = jones_matrix(plate);
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  return u.adjoint() * h * u;
}

std::vector<PlateSetting> mub_plate_table() {
  const auto hwp = [](double a) { return WavePlate{PlateKind::Half, a}; };
  const auto qwp = [](double a) { return WavePlate{PlateKind::Quarter, a}; };
  return {
      {"x0", 0, 0, hwp(22.5), hwp(22.5)},  {"x1", 0, 1, hwp(-22.5), hwp(-22.5)},
      {"y0", 1, 0, qwp(45.0), qwp(-45.0)}, {"y1", 1, 1, qwp(-45.0), qwp(45.0)},
      {"z0", 2, 0, hwp(0.0), hwp(0.0)},    {"z1", 2, 1, hwp(45.0), hwp(45.0)},
  };
}

}  // namespace qurc
