#include "qurc/measurement.hpp"

#include <string>

namespace qurc {

MeasurementOutcomeEnsemble measure_local(const DensityMatrix& rho_ab,
                                         const ProjectiveMeasurement& m) {
  if (!rho_ab.is_bipartite())
    throw Error(ErrorCode::DimensionMismatch, "measure_local needs a bipartite state");
  const int da = rho_ab.dims()[0];
  const int db = rho_ab.dims()[1];
  if (m.dim() != da)
    throw Error(ErrorCode::DimensionMismatch,
                "measurement dim " + std::to_string(m.dim()) + " vs subsystem A dim " +
                    std::to_string(da));

  const ComplexMatrix& rho = rho_ab.matrix();
  const ComplexMatrix id_b = ComplexMatrix::Identity(db, db);

  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> joint;
  std::vector<std::optional<DensityMatrix>> memory;
  ComplexMatrix dephased = ComplexMatrix::Zero(rho.rows(), rho.cols());

  for (std::size_t i = 0; i < m.outcomes(); ++i) {
    const ComplexMatrix lifted = tensor_product(m.projectors()[i], id_b);
    dephased += lifted * rho * lifted;

    // (<u| (x) I) rho (|u> (x) I)
    const ComplexVector u = m.basis().col(static_cast<Eigen::Index>(i));
    ComplexMatrix block = ComplexMatrix::Zero(db, db);
    for (int a = 0; a < da; ++a)
      for (int a2 = 0; a2 < da; ++a2)
        block += std::conj(u[a]) * u[a2] * rho.block(a * db, a2 * db, db, db);
    block = (block + block.adjoint()) / 2.0;

    double p = block.trace().real();
    if (p < -kZeroProbability)
      throw Error(ErrorCode::NotPSD, "negative outcome probability " + std::to_string(p));
    if (p < kZeroProbability) {
      probs.push_back(std::max(p, 0.0));
      joint.emplace_back(std::nullopt);
      memory.emplace_back(std::nullopt);
      continue;
    }
    probs.push_back(p);
    DensityMatrix cond_b = project_to_density(block / p, {db});
    joint.emplace_back(validate_density(tensor_product(m.projectors()[i], cond_b.matrix()),
                                        rho_ab.dims()));
    memory.emplace_back(std::move(cond_b));
  }

  return MeasurementOutcomeEnsemble{std::move(probs), std::move(joint), std::move(memory),
                                    validate_density(dephased, rho_ab.dims())};
}

DensityMatrix dephase_global(const DensityMatrix& rho, const ComplexMatrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim())
    throw Error(ErrorCode::DimensionMismatch, "basis does not span the state space");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    const ComplexVector v = basis.col(k);
    const double pop = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    out += pop * outer<double>(v);
  }
  return validate_density(out, rho.dims());
}

}  // namespace qurc
