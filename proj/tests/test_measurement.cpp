#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qurc/infotheory.hpp"
#include "qurc/measurement.hpp"
#include "qurc/random.hpp"
#include "test_util.hpp"

using namespace qurc;
using namespace qurc::test;

TEST_CASE("measure_local on an eigenstate") {
  const auto mubs = mub_qubit();
  const DensityMatrix hh = ket_density(Polarization::H, Polarization::H);
  const auto ens = measure_local(hh, mubs[2]);
  CHECK(ens.probabilities[0] == doctest::Approx(1.0));
  CHECK(ens.probabilities[1] == 0.0);
  CHECK(ens.is_zero_probability(1));
  REQUIRE(ens.conditional_memory[0].has_value());
  CHECK(max_diff(ens.conditional_memory[0]->matrix(), diag({1, 0})) < 1e-15);
  CHECK(max_diff(ens.dephased_joint.matrix(), hh.matrix()) < 1e-15);
}

TEST_CASE("measure_local steers the Bell state") {
  const auto mubs = mub_qubit();
  const auto ens = measure_local(phi_plus(), mubs[0]);
  CHECK(ens.probabilities[0] == doctest::Approx(0.5));
  CHECK(ens.probabilities[1] == doctest::Approx(0.5));
  for (std::size_t i = 0; i < 2; ++i) {
    const ComplexMatrix& b = ens.conditional_memory[i]->matrix();
    CHECK((b * b).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    // Outcome D on A leaves B in D; A leaves B in A.
    CHECK(max_diff(b, mubs[0].projectors()[i]) < 1e-12);
    CHECK(max_diff(ens.conditional_joint[i]->matrix(),
                   tensor_product(mubs[0].projectors()[i], mubs[0].projectors()[i])) < 1e-12);
  }
  CHECK(von_neumann_entropy(ens.dephased_joint) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equal Bell mixture dephases to the maximally mixed state under M_z") {
  const auto ens = measure_local(bell_diagonal_state({0.5, 45.0}), mub_qubit()[2]);
  CHECK(max_diff(ens.dephased_joint.matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-15);
}

TEST_CASE("measure_local dimension checks") {
  const DensityMatrix single = validate_density(ComplexMatrix::Identity(2, 2) / 2.0, {2});
  CHECK_THROWS_AS(measure_local(single, mub_qubit()[0]), Error);
  const DensityMatrix qutrit_qubit = maximally_mixed({3, 2});
  try {
    measure_local(qutrit_qubit, mub_qubit()[0]);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("dephase_global") {
  const ComplexMatrix hv = ComplexMatrix::Identity(2, 2);
  const DensityMatrix d = validate_density(polarization_ket(Polarization::D).projector(), {2});
  CHECK(max_diff(dephase_global(d, hv).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  Rng rng(1);
  const DensityMatrix rho = random_mixed_state(2, 2, 2, rng);
  const ComplexMatrix eigvecs = spectrum(rho).eigenvectors;
  CHECK(max_diff(dephase_global(rho, eigvecs).matrix(), rho.matrix()) < 1e-12);

  CHECK(max_diff(dephase_global(phi_plus(), ComplexMatrix::Identity(4, 4)).matrix(),
                 diag({0.5, 0, 0, 0.5})) < 1e-15);
  CHECK_THROWS_AS(dephase_global(phi_plus(), hv), Error);
}

TEST_CASE("post-measurement state properties on random states") {
  Rng rng(31337);
  const auto mubs = mub_qubit();
  for (int trial = 0; trial < 300; ++trial) {
    const DensityMatrix rho = random_mixed_state(2, 2, 1 + trial % 4, rng);
    const DensityMatrix rho_b = partial_trace(rho, 1);
    for (const auto& m : mubs) {
      const auto ens = measure_local(rho, m);
      const ComplexMatrix& mb = ens.dephased_joint.matrix();
      CHECK(std::abs(mb.trace() - 1.0) < 1e-10);
      double psum = 0;
      for (double p : ens.probabilities) psum += p;
      CHECK(psum == doctest::Approx(1.0).epsilon(1e-10));

      for (const auto& p : m.projectors()) {
        const ComplexMatrix lifted = tensor_product(p, ComplexMatrix::Identity(2, 2));
        CHECK((lifted * mb - mb * lifted).cwiseAbs().maxCoeff() < 1e-9);
      }
      // Measuring again changes nothing.
      CHECK(max_diff(measure_local(ens.dephased_joint, m).dephased_joint.matrix(), mb) < 1e-10);

      // S(rho_MB) = H(p) + sum_i p_i S(rho_{B|i}).
      double block = shannon_entropy(ens.probabilities);
      for (std::size_t i = 0; i < ens.probabilities.size(); ++i)
        if (!ens.is_zero_probability(i))
          block += ens.probabilities[i] * von_neumann_entropy(*ens.conditional_memory[i]);
      CHECK(std::abs(von_neumann_entropy(ens.dephased_joint) - block) < 1e-9);

      // Averaging the conditional memory states gives back rho_B.
      ComplexMatrix avg = ComplexMatrix::Zero(2, 2);
      for (std::size_t i = 0; i < ens.probabilities.size(); ++i)
        if (!ens.is_zero_probability(i)) avg += ens.probabilities[i] * ens.conditional_memory[i]->matrix();
      CHECK(max_diff(avg, rho_b.matrix()) < 1e-10);
    }
  }
}
