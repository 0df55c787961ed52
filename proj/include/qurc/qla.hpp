#pragma once

// Dense complex linear algebra for small Hermitian matrices.
//
// Kernels are templated on the real scalar so they work for float, double and
// long double; the physics layers above use the double instantiations. Basis
// ordering of composite systems is subsystem-major: index = i_A * d_B + i_B,
// so a two-qubit vector is (HH, HV, VH, VV).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qurc/error.hpp"

namespace qurc {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kEigInputHermitian = 1e-8;
inline constexpr double kPsdFloor = -1e-9;
inline constexpr double kSqrtPsdFloor = -1e-6;
inline constexpr double kTrace = 1e-6;
inline constexpr double kZeroEntropy = 1e-15;
}  // namespace tol

/// Eigendecomposition of a Hermitian matrix: eigenvalues descending, unit
/// eigenvectors in the matching columns.
template <typename Real>
struct Spectrum {
  RVector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;

  CMatrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
auto hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

/// Kronecker product, left operand index major.
template <typename DerivedA, typename DerivedB>
auto tensor_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
  return out;
}

/// Trace over every factor except `keep`. `dims` lists the factor dimensions.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& dims,
                   std::size_t keep) {
  using Scalar = typename Derived::Scalar;
  if (dims.size() < 2 || keep >= dims.size())
    throw Error(ErrorCode::InvalidSubsystem,
                "keep=" + std::to_string(keep) + " with " + std::to_string(dims.size()) +
                    " factors");
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if (m.rows() != total || m.cols() != total)
    throw Error(ErrorCode::DimensionMismatch, "matrix size does not match subsystem dims");

  long inner = 1;
  for (std::size_t k = keep + 1; k < dims.size(); ++k) inner *= dims[k];
  const long dk = dims[keep];
  const long outer = total / (inner * dk);

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Scalar acc(0);
      for (long o = 0; o < outer; ++o)
        for (long n = 0; n < inner; ++n)
          acc += m((o * dk + i) * inner + n, (o * dk + j) * inner + n);
      out(i, j) = acc;
    }
  return out;
}

namespace detail {

// Lexicographic order on complex entries: real part, then imaginary part.
template <typename Real>
bool lex_less(const CVector<Real>& a, const CVector<Real>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// Fix the phase freedom: first non-negligible entry becomes real positive.
template <typename Real>
void normalize_phase(CVector<Real>& v) {
  const Real cutoff = Real(1e-12);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > cutoff) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::complex<Real>(v[i].real(), Real(0));
      return;
    }
  }
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// The input is symmetrized as (m + m^H)/2 first. Eigenvalues come back in
/// descending order; eigenvectors of numerically tied eigenvalues are ordered
/// lexicographically after phase normalization.
template <typename Real>
Spectrum<Real> eig_hermitian(const CMatrix<Real>& m,
                             Real hermitian_tol = Real(tol::kEigInputHermitian),
                             int max_sweeps = 100) {
  using C = std::complex<Real>;
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "eig_hermitian needs a square matrix");
  if (!m.allFinite()) throw Error(ErrorCode::NotHermitian, "non-finite entries");
  if (hermitian_defect(m) > hermitian_tol)
    throw Error(ErrorCode::NotHermitian,
                "asymmetry " + std::to_string(static_cast<double>(hermitian_defect(m))));

  const Eigen::Index n = m.rows();
  CMatrix<Real> a = (m + m.adjoint()) / Real(2);
  CMatrix<Real> v = CMatrix<Real>::Identity(n, n);

  const Real frob = a.norm();
  const Real negligible = std::numeric_limits<Real>::epsilon() * Real(1e-3) * frob;

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Real off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off == Real(0)) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real mag = std::abs(a(p, q));
        if (mag <= negligible) {
          a(p, q) = a(q, p) = C(0);
          continue;
        }
        const C phase = a(p, q) / mag;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        const Real theta = (aqq - app) / (Real(2) * mag);
        Real t = Real(1) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        if (theta < 0) t = -t;
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real s = t * c;
        const C sp = s * phase;             // U(p,q)
        const C sq = -s * std::conj(phase);  // U(q,p)

        // a <- a U
        for (Eigen::Index r = 0; r < n; ++r) {
          const C arp = a(r, p);
          const C arq = a(r, q);
          a(r, p) = c * arp + sq * arq;
          a(r, q) = sp * arp + c * arq;
        }
        // a <- U^H a
        for (Eigen::Index r = 0; r < n; ++r) {
          const C apr = a(p, r);
          const C aqr = a(q, r);
          a(p, r) = c * apr + std::conj(sq) * aqr;
          a(q, r) = std::conj(sp) * apr + c * aqr;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(app - t * mag);
        a(q, q) = C(aqq + t * mag);
        for (Eigen::Index r = 0; r < n; ++r) {
          const C vrp = v(r, p);
          const C vrq = v(r, q);
          v(r, p) = c * vrp + sq * vrq;
          v(r, q) = sp * vrp + c * vrq;
        }
      }
    }
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "Jacobi exceeded " + std::to_string(max_sweeps) + " sweeps");

  std::vector<std::pair<Real, CVector<Real>>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector<Real> col = v.col(k);
    col.normalize();
    detail::normalize_phase(col);
    pairs.emplace_back(a(k, k).real(), std::move(col));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  // Reorder runs of tied eigenvalues by eigenvector entries.
  const Real tie = Real(1e-12) * std::max(Real(1), frob);
  for (std::size_t lo = 0; lo < pairs.size();) {
    std::size_t hi = lo + 1;
    while (hi < pairs.size() && pairs[hi - 1].first - pairs[hi].first <= tie) ++hi;
    std::sort(pairs.begin() + static_cast<long>(lo), pairs.begin() + static_cast<long>(hi),
              [](const auto& x, const auto& y) { return detail::lex_less(x.second, y.second); });
    lo = hi;
  }

  Spectrum<Real> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = pairs[static_cast<std::size_t>(k)].first;
    out.eigenvectors.col(k) = pairs[static_cast<std::size_t>(k)].second;
  }
  return out;
}

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// [floor, 0) are clamped to zero; anything below the floor throws NotPSD.
template <typename Real>
CMatrix<Real> matrix_sqrt_psd(const CMatrix<Real>& m, Real floor = Real(tol::kSqrtPsdFloor)) {
  const Spectrum<Real> sp = eig_hermitian<Real>(m);
  RVector<Real> roots(sp.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    const Real lambda = sp.eigenvalues[k];
    if (lambda < floor)
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(static_cast<double>(lambda)));
    roots[k] = std::sqrt(std::max(lambda, Real(0)));
  }
  CMatrix<Real> r = sp.eigenvectors * roots.template cast<std::complex<Real>>().asDiagonal() *
                    sp.eigenvectors.adjoint();
  return (r + r.adjoint()) / Real(2);
}

template <typename Real>
CMatrix<Real> outer(const CVector<Real>& ket) {
  return ket * ket.adjoint();
}

/// Trace-one, positive semidefinite Hermitian matrix tagged with the
/// dimensions of its tensor factors. Only obtainable through validation.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  bool is_bipartite() const noexcept { return dims_.size() == 2; }

  friend DensityMatrix validate_density(const ComplexMatrix& m, std::vector<int> dims);
  friend DensityMatrix project_to_density(const ComplexMatrix& m, std::vector<int> dims);

 private:
  DensityMatrix(ComplexMatrix m, std::vector<int> dims) : mat_(std::move(m)), dims_(std::move(dims)) {}

  ComplexMatrix mat_;
  std::vector<int> dims_;
};

/// Checks Hermiticity (1e-10), trace (1e-6) and positivity (floor -1e-9).
/// Eigenvalues inside [-1e-9, 0) are clamped and the trace renormalized.
DensityMatrix validate_density(const ComplexMatrix& m, std::vector<int> dims);

/// Nearest state for matrices that are PSD by construction up to rounding:
/// symmetrizes, drops every negative eigenvalue and renormalizes.
DensityMatrix project_to_density(const ComplexMatrix& m, std::vector<int> dims);

DensityMatrix pure_density(const ComplexVector& ket, std::vector<int> dims);
DensityMatrix maximally_mixed(std::vector<int> dims);

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep);

Spectrum<double> spectrum(const DensityMatrix& rho);
ComplexMatrix matrix_sqrt_psd(const DensityMatrix& rho);

}  // namespace qurc
