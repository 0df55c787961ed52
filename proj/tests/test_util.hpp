#pragma once

#include <cmath>
#include <complex>

#include "qurc/qla.hpp"
#include "qurc/states.hpp"

namespace qurc::test {

inline ComplexMatrix mat2(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                          std::complex<double> d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexMatrix sigma_x() { return mat2(0, 1, 1, 0); }
inline ComplexMatrix sigma_y() { return mat2(0, {0, -1}, {0, 1}, 0); }
inline ComplexMatrix sigma_z() { return mat2(1, 0, 0, -1); }

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

inline DensityMatrix phi_plus() { return bell_diagonal_state({1.0, 45.0}); }

inline DensityMatrix ket_density(Polarization a, Polarization b) {
  return pure_density(tensor_product(polarization_ket(a).amplitudes(), polarization_ket(b).amplitudes()),
                      {2, 2});
}

}  // namespace qurc::test
