#include "qurc/qla.hpp"

#include <string>

namespace qurc {

namespace {

void check_dims(const ComplexMatrix& m, const std::vector<int>& dims) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
  if (dims.empty()) throw Error(ErrorCode::DimensionMismatch, "empty subsystem dims");
  long total = 1;
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorCode::DimensionMismatch, "non-positive subsystem dim");
    total *= d;
  }
  if (total != m.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "dims product " + std::to_string(total) + " != " + std::to_string(m.rows()));
  if (!m.allFinite()) throw Error(ErrorCode::NotHermitian, "non-finite entries");
}

ComplexMatrix rebuild(const Spectrum<double>& sp, const RealVector& values) {
  ComplexMatrix r = sp.eigenvectors * values.cast<std::complex<double>>().asDiagonal() *
                    sp.eigenvectors.adjoint();
  return (r + r.adjoint()) / 2.0;
}

}  // namespace

DensityMatrix validate_density(const ComplexMatrix& m, std::vector<int> dims) {
  check_dims(m, dims);
  const double defect = hermitian_defect(m);
  if (defect > tol::kHermitian)
    throw Error(ErrorCode::NotHermitian, "asymmetry " + std::to_string(defect));
  ComplexMatrix h = (m + m.adjoint()) / 2.0;

  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > tol::kTrace)
    throw Error(ErrorCode::TraceMismatch, "trace " + std::to_string(trace));

  const Spectrum<double> sp = eig_hermitian<double>(h);
  const double smallest = sp.eigenvalues.minCoeff();
  if (smallest < tol::kPsdFloor)
    throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(smallest));
  if (smallest < 0.0) {
    RealVector clamped = sp.eigenvalues.cwiseMax(0.0);
    h = rebuild(sp, clamped / clamped.sum());
  } else {
    h /= trace;
  }
  return DensityMatrix(std::move(h), std::move(dims));
}

DensityMatrix project_to_density(const ComplexMatrix& m, std::vector<int> dims) {
  check_dims(m, dims);
  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  const Spectrum<double> sp = eig_hermitian<double>(h, 1e300);
  RealVector clamped = sp.eigenvalues.cwiseMax(0.0);
  const double total = clamped.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::NotPSD, "no positive spectral weight");
  return DensityMatrix(rebuild(sp, clamped / total), std::move(dims));
}

DensityMatrix pure_density(const ComplexVector& ket, std::vector<int> dims) {
  const double n = ket.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw Error(ErrorCode::TraceMismatch, "ket norm " + std::to_string(n));
  return validate_density(outer<double>(ket), std::move(dims));
}

DensityMatrix maximally_mixed(std::vector<int> dims) {
  long total = 1;
  for (int d : dims) total *= d;
  return validate_density(ComplexMatrix::Identity(total, total) / static_cast<double>(total),
                          std::move(dims));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return validate_density(tensor_product(a.matrix(), b.matrix()), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  return validate_density(reduced, {rho.dims()[keep]});
}

Spectrum<double> spectrum(const DensityMatrix& rho) { return eig_hermitian<double>(rho.matrix()); }

ComplexMatrix matrix_sqrt_psd(const DensityMatrix& rho) {
  return matrix_sqrt_psd<double>(rho.matrix());
}

}  // namespace qurc
