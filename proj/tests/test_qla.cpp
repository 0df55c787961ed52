#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>

#include "qurc/qla.hpp"
#include "qurc/random.hpp"
#include "qurc/states.hpp"
#include "test_util.hpp"

using namespace qurc;
using namespace qurc::test;

TEST_CASE("tensor_product basis bookkeeping") {
  CHECK(max_diff(tensor_product(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
                 ComplexMatrix::Identity(4, 4)) == 0.0);

  const ComplexMatrix h = polarization_ket(Polarization::H).projector();
  const ComplexMatrix v = polarization_ket(Polarization::V).projector();
  CHECK(max_diff(tensor_product(h, v), diag({0, 1, 0, 0})) == 0.0);
}

TEST_CASE("tensor_product matches the Kronecker index formula") {
  const ComplexMatrix a = sigma_x(), b = sigma_z();
  const ComplexMatrix k = tensor_product(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) CHECK(k(i * 2 + j, r * 2 + s) == a(i, r) * b(j, s));
  // sigma_x (x) sigma_z has +1 at (0,2),(2,0) and -1 at (1,3),(3,1).
  CHECK(k(0, 2) == std::complex<double>(1));
  CHECK(k(1, 3) == std::complex<double>(-1));
}

TEST_CASE("partial_trace examples") {
  const DensityMatrix bell = phi_plus();
  CHECK(max_diff(partial_trace(bell, 1).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const DensityMatrix hh = ket_density(Polarization::H, Polarization::H);
  CHECK(max_diff(partial_trace(hh, 0).matrix(), diag({1, 0})) < 1e-15);

  const DensityMatrix phi30 = bell_diagonal_state({1.0, 30.0});
  CHECK(max_diff(partial_trace(phi30, 1).matrix(), diag({0.75, 0.25})) < 1e-12);

  CHECK_THROWS_AS(partial_trace(bell, 2), Error);
  try {
    partial_trace(bell, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSubsystem);
  }
  const DensityMatrix single = validate_density(ComplexMatrix::Identity(2, 2) / 2.0, {2});
  CHECK_THROWS_AS(partial_trace(single, 0), Error);
}

TEST_CASE("partial_trace properties on random product states") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix a = random_mixed_state(2, 1, 2, rng);
    const DensityMatrix b = random_mixed_state(3, 1, 3, rng);
    const DensityMatrix ab = tensor_product(validate_density(a.matrix(), {2}), validate_density(b.matrix(), {3}));
    CHECK(ab.dims() == std::vector<int>{2, 3});
    CHECK(max_diff(partial_trace(ab, 0).matrix(), a.matrix()) <= 1e-12);
    CHECK(max_diff(partial_trace(ab, 1).matrix(), b.matrix()) <= 1e-12);

    const DensityMatrix mixed = random_mixed_state(2, 2, 3, rng);
    const ComplexMatrix reduced = partial_trace(mixed.matrix(), mixed.dims(), 0);
    CHECK(std::abs(reduced.trace() - mixed.matrix().trace()) <= 1e-12);
  }
}

TEST_CASE("partial_trace keeps the middle of three factors") {
  Rng rng(3);
  const ComplexMatrix a = random_mixed_state(2, 1, 2, rng).matrix();
  const ComplexMatrix b = random_mixed_state(3, 1, 2, rng).matrix();
  const ComplexMatrix c = random_mixed_state(2, 1, 2, rng).matrix();
  const ComplexMatrix abc = tensor_product(tensor_product(a, b), c);
  CHECK(max_diff(partial_trace(abc, {2, 3, 2}, 1), b) < 1e-14);
}

TEST_CASE("eig_hermitian examples") {
  const Spectrum<double> sx = eig_hermitian<double>(sigma_x());
  CHECK(sx.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sx.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sx.eigenvectors(0, 0) - s) < 1e-14);
  CHECK(std::abs(sx.eigenvectors(1, 0) - s) < 1e-14);
  CHECK(std::abs(std::abs(sx.eigenvectors(0, 1)) - s) < 1e-14);
  CHECK(std::abs(sx.eigenvectors(0, 1) + sx.eigenvectors(1, 1)) < 1e-14);

  const Spectrum<double> mixed = eig_hermitian<double>(ComplexMatrix::Identity(4, 4) / 4.0);
  for (int i = 0; i < 4; ++i) CHECK(mixed.eigenvalues[i] == 0.25);

  // Equal mixture of two orthogonal pure states: spectrum {1/2, 1/2, 0, 0}.
  const Spectrum<double> half = spectrum(bell_diagonal_state({0.5, 45.0}));
  CHECK(half.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(half.eigenvalues[2]) < 1e-14);
  CHECK(std::abs(half.eigenvalues[3]) < 1e-14);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  ComplexMatrix m = sigma_x();
  m(0, 1) = 2.0;
  try {
    (void)eig_hermitian<double>(m);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
  // Asymmetry below the 1e-8 input tolerance is symmetrized away.
  m = sigma_x();
  m(0, 1) += 1e-9;
  CHECK_NOTHROW((void)eig_hermitian<double>(m));
}

TEST_CASE("eig_hermitian reports exhausted sweep budget") {
  Rng rng(11);
  try {
    (void)eig_hermitian<double>(random_hermitian(6, rng), 1e-8, 1);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("eig_hermitian reconstruction and unitarity over random matrices") {
  Rng rng(2024);
  double worst_rec = 0, worst_unit = 0, worst_vs_eigen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix m = random_hermitian(4, rng);
    const Spectrum<double> sp = eig_hermitian<double>(m);
    worst_rec = std::max(worst_rec, max_diff(sp.reconstruct(), m));
    worst_unit = std::max(worst_unit, max_diff(sp.eigenvectors.adjoint() * sp.eigenvectors,
                                               ComplexMatrix::Identity(4, 4)));
    for (int i = 0; i + 1 < 4; ++i) CHECK(sp.eigenvalues[i] >= sp.eigenvalues[i + 1]);
    // Independent solver as oracle for the eigenvalues (ascending there).
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
    worst_vs_eigen = std::max(
        worst_vs_eigen, (sp.eigenvalues - ref.eigenvalues().reverse()).cwiseAbs().maxCoeff());
  }
  CHECK(worst_rec <= 1e-9);
  CHECK(worst_unit <= 1e-9);
  CHECK(worst_vs_eigen <= 1e-9);
}

TEST_CASE("eig_hermitian is deterministic and orders ties") {
  Rng rng(5);
  const ComplexMatrix m = random_hermitian(4, rng);
  const Spectrum<double> a = eig_hermitian<double>(m);
  const Spectrum<double> b = eig_hermitian<double>(m);
  CHECK(max_diff(a.eigenvectors, b.eigenvectors) == 0.0);

  // Degenerate eigenvalue: eigenvectors ascend lexicographically, so e_1
  // (leading entry 0) precedes e_0 (leading entry 1).
  const Spectrum<double> d = eig_hermitian<double>(diag({0.5, 0.5, 0.0}));
  CHECK(std::abs(d.eigenvectors(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(d.eigenvectors(0, 1) - 1.0) < 1e-15);
}

TEST_CASE("kernels instantiate for other scalar types") {
  CMatrix<long double> m(2, 2);
  m << 2.0L, std::complex<long double>(0, 1), std::complex<long double>(0, -1), 2.0L;
  const Spectrum<long double> sp = eig_hermitian<long double>(m);
  CHECK(static_cast<double>(sp.eigenvalues[0]) == doctest::Approx(3.0));
  CHECK(static_cast<double>(sp.eigenvalues[1]) == doctest::Approx(1.0));

  CMatrix<float> f = CMatrix<float>::Identity(2, 2);
  CHECK(matrix_sqrt_psd<float>(f)(0, 0).real() == doctest::Approx(1.0f));
}

TEST_CASE("matrix_sqrt_psd examples") {
  CHECK(max_diff(matrix_sqrt_psd<double>(ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(max_diff(matrix_sqrt_psd<double>(diag({0.25, 0.75})), diag({0.5, std::sqrt(0.75)})) < 1e-15);
  const ComplexMatrix d = polarization_ket(Polarization::D).projector();
  CHECK(max_diff(matrix_sqrt_psd<double>(d), d) < 1e-14);
  try {
    (void)matrix_sqrt_psd<double>(diag({1.0, -1e-3}));
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPSD);
  }
  CHECK_NOTHROW((void)matrix_sqrt_psd<double>(diag({1.0, -1e-8})));
}

TEST_CASE("matrix_sqrt_psd squares back for random states") {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + trial % 4;
    const DensityMatrix rho = random_mixed_state(2, 2, k, rng);
    const ComplexMatrix r = matrix_sqrt_psd(rho);
    CHECK(max_diff(r * r, rho.matrix()) <= 1e-8);
  }
}

TEST_CASE("validate_density") {
  CHECK_NOTHROW(validate_density(ComplexMatrix::Identity(2, 2) / 2.0, {2}));

  const auto code_of = [](const ComplexMatrix& m, std::vector<int> dims) {
    try {
      (void)validate_density(m, std::move(dims));
    } catch (const Error& e) {
      return std::optional<ErrorCode>(e.code());
    }
    return std::optional<ErrorCode>();
  };
  CHECK(code_of(diag({1.2, -0.2}), {2}) == ErrorCode::NotPSD);
  CHECK(code_of(diag({0.6, 0.6}), {2}) == ErrorCode::TraceMismatch);
  CHECK(code_of(mat2(0.5, 0.1, 0.2, 0.5), {2}) == ErrorCode::NotHermitian);
  CHECK(code_of(diag({0.5, 0.5, 0, 0}), {2, 3}) == ErrorCode::DimensionMismatch);

  const DensityMatrix ok = validate_density(diag({0.5 + 1e-10, 0.5 - 1e-10, 0, 0}), {2, 2});
  CHECK(std::abs(ok.matrix().trace() - 1.0) < 1e-15);

  // Small negative eigenvalue is clamped and the trace restored.
  const DensityMatrix clamped = validate_density(diag({0.5 + 5e-10, 0.5, -5e-10}), {3});
  CHECK(spectrum(clamped).eigenvalues.minCoeff() >= 0.0);
  CHECK(std::abs(clamped.matrix().trace() - 1.0) < 1e-15);
}
