#include "qurc/tomography.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/SVD>

#include "qurc/csv.hpp"
#include "qurc/parallel.hpp"
#include "qurc/random.hpp"

namespace qurc {

ComplexMatrix TomographySetting::projector() const {
  return tensor_product(basis_a().projector(), basis_b().projector());
}

std::vector<TomographySetting> standard_settings(SettingsMode mode) {
  using P = Polarization;
  const std::vector<P> kets = mode == SettingsMode::ThirtySix
                                  ? std::vector<P>{P::H, P::V, P::D, P::A, P::R, P::L}
                                  : std::vector<P>{P::H, P::V, P::D, P::R};
  std::vector<TomographySetting> out;
  for (P a : kets)
    for (P b : kets) out.push_back({a, b});
  return out;
}

std::vector<double> expected_counts(const DensityMatrix& rho,
                                    std::span<const TomographySetting> settings, double exposure) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "two-qubit state expected");
  std::vector<double> out;
  out.reserve(settings.size());
  for (const auto& s : settings)
    out.push_back(exposure * std::max(0.0, (s.projector() * rho.matrix()).trace().real()));
  return out;
}

CountTable simulate_counts(const DensityMatrix& rho, std::span<const TomographySetting> settings,
                           double exposure, std::uint64_t seed) {
  if (!(exposure > 0.0)) throw Error(ErrorCode::InvalidConfig, "exposure must be positive");
  CountTable table;
  table.settings.assign(settings.begin(), settings.end());
  table.exposure = exposure;
  table.seed = seed;
  Rng rng(seed);
  for (double mean : expected_counts(rho, settings, exposure)) table.counts.push_back(rng.poisson(mean));
  return table;
}

namespace {

std::array<ComplexMatrix, 4> paulis() {
  using C = std::complex<double>;
  std::array<ComplexMatrix, 4> s;
  for (auto& m : s) m = ComplexMatrix::Zero(2, 2);
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, C(0, -1), C(0, 1), 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

void check_inputs(std::span<const TomographySetting> settings, std::span<const double> counts,
                  double exposure) {
  if (settings.size() != counts.size())
    throw Error(ErrorCode::DimensionMismatch, "one count per setting required");
  if (!(exposure > 0.0)) throw Error(ErrorCode::InvalidConfig, "exposure must be positive");
}

}  // namespace

ReconstructionResult linear_reconstruct(std::span<const TomographySetting> settings,
                                        std::span<const double> counts, double exposure) {
  check_inputs(settings, counts, exposure);
  const auto s = paulis();
  std::array<ComplexMatrix, 16> ops;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ops[4 * i + j] = tensor_product(s[i], s[j]);

  const auto k = static_cast<Eigen::Index>(settings.size());
  Eigen::MatrixXd design(k, 16);
  Eigen::VectorXd freq(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const ComplexMatrix proj = settings[static_cast<std::size_t>(r)].projector();
    for (int c = 0; c < 16; ++c) design(r, c) = 0.25 * (proj * ops[c]).trace().real();
    freq[r] = counts[static_cast<std::size_t>(r)] / exposure;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 16)
    throw Error(ErrorCode::UnderdeterminedSettings,
                "design rank " + std::to_string(qr.rank()) + " < 16");
  const Eigen::VectorXd stokes = qr.solve(freq);

  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int c = 0; c < 16; ++c) rho += 0.25 * stokes[c] * ops[c];
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::UnderdeterminedSettings, "estimate has no weight");
  rho /= tr;
  rho = (rho + rho.adjoint()) / 2.0;

  ReconstructionResult out;
  out.estimate = rho;
  out.method = ReconstructionMethod::Linear;
  try {
    (void)validate_density(rho, {2, 2});
    out.physical = true;
  } catch (const Error&) {
    out.physical = false;
  }
  return out;
}

ReconstructionResult linear_reconstruct(const CountTable& table) {
  const auto counts = table.counts_as_double();
  return linear_reconstruct(table.settings, counts, table.exposure);
}

PoissonLikelihood::PoissonLikelihood(std::span<const TomographySetting> settings,
                                     std::span<const double> counts, double exposure)
    : counts_(counts.begin(), counts.end()), exposure_(exposure) {
  check_inputs(settings, counts, exposure);
  for (const auto& s : settings) projectors_.push_back(s.projector());
}

ComplexMatrix PoissonLikelihood::factor(const Eigen::VectorXd& x) const {
  ComplexMatrix t = ComplexMatrix::Zero(dim_, dim_);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < dim_; ++a) t(a, a) = x[k++];
  for (Eigen::Index a = 0; a < dim_; ++a)
    for (Eigen::Index b = a + 1; b < dim_; ++b) {
      t(a, b) = {x[k], x[k + 1]};
      k += 2;
    }
  return t;
}

ComplexMatrix PoissonLikelihood::state(const Eigen::VectorXd& x) const {
  const ComplexMatrix t = factor(x);
  ComplexMatrix g = t.adjoint() * t;
  g /= g.trace().real();
  return (g + g.adjoint()) / 2.0;
}

Eigen::VectorXd PoissonLikelihood::params_from_state(const ComplexMatrix& rho) const {
  Eigen::LLT<ComplexMatrix> llt(rho);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPSD, "starting state is not positive definite");
  const ComplexMatrix t = llt.matrixL().adjoint();
  Eigen::VectorXd x(num_params());
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < dim_; ++a) x[k++] = t(a, a).real();
  for (Eigen::Index a = 0; a < dim_; ++a)
    for (Eigen::Index b = a + 1; b < dim_; ++b) {
      x[k++] = t(a, b).real();
      x[k++] = t(a, b).imag();
    }
  return x;
}

namespace {
constexpr double kMeanFloor = 1e-300;
}

double PoissonLikelihood::value_of_state(const ComplexMatrix& rho) const {
  double l = 0.0;
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const double mu = std::max(exposure_ * (projectors_[k] * rho).trace().real(), kMeanFloor);
    if (counts_[k] > 0.0) l += counts_[k] * std::log(mu);
    l -= mu;
  }
  return l;
}

double PoissonLikelihood::value(const Eigen::VectorXd& x) const { return value_of_state(state(x)); }

Eigen::VectorXd PoissonLikelihood::gradient(const Eigen::VectorXd& x) const {
  const ComplexMatrix t = factor(x);
  const ComplexMatrix g = t.adjoint() * t;
  const double tr = g.trace().real();
  const ComplexMatrix rho = g / tr;

  // R = exposure * sum_k (n_k / mu_k - 1) P_k, the derivative of L in rho.
  ComplexMatrix r = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const double mu = std::max(exposure_ * (projectors_[k] * rho).trace().real(), kMeanFloor);
    r += exposure_ * (counts_[k] / mu - 1.0) * projectors_[k];
  }
  r -= (r * rho).trace().real() * ComplexMatrix::Identity(dim_, dim_);
  const ComplexMatrix w = r * t.adjoint();

  Eigen::VectorXd grad(num_params());
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < dim_; ++a) grad[k++] = 2.0 / tr * w(a, a).real();
  for (Eigen::Index a = 0; a < dim_; ++a)
    for (Eigen::Index b = a + 1; b < dim_; ++b) {
      grad[k++] = 2.0 / tr * w(b, a).real();
      grad[k++] = -2.0 / tr * w(b, a).imag();
    }
  return grad;
}

ReconstructionResult mle_reconstruct(std::span<const TomographySetting> settings,
                                     std::span<const double> counts, double exposure,
                                     const std::optional<DensityMatrix>& init,
                                     const MleOptions& options) {
  const PoissonLikelihood model(settings, counts, exposure);
  ComplexMatrix start;
  if (init) {
    start = init->matrix();
  } else {
    const ReconstructionResult lin = linear_reconstruct(settings, counts, exposure);
    start = project_to_density(lin.estimate, {2, 2}).matrix();
  }
  // Cholesky needs a strictly positive definite start.
  constexpr double kInteriorMix = 1e-3;
  start = (1.0 - kInteriorMix) * start + kInteriorMix * ComplexMatrix::Identity(4, 4) / 4.0;

  // BFGS ascent on the factor parameters. The likelihood is invariant under
  // scaling T, so the iterate is kept at Tr(T^H T) = 1 and the gradient is
  // always evaluated there.
  const Eigen::Index n = model.num_params();
  const auto normalize = [&](Eigen::VectorXd& v) { v /= std::sqrt(model.factor(v).squaredNorm()); };
  Eigen::VectorXd x = model.params_from_state(start);
  normalize(x);
  double value = model.value(x);
  Eigen::VectorXd grad = model.gradient(x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, grad.norm());

  ReconstructionResult out;
  out.method = ReconstructionMethod::Mle;
  out.converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (grad.norm() < options.gradient_tol) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd dir = h * grad;
    if (dir.dot(grad) <= 0.0) {
      h = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, grad.norm());
      dir = h * grad;
    }
    double alpha = 1.0;
    Eigen::VectorXd trial;
    double trial_value = value;
    bool improved = false;
    while (alpha > 1e-20) {
      trial = x + alpha * dir;
      trial_value = model.value(trial);
      if (std::isfinite(trial_value) && trial_value >= value + 1e-4 * alpha * dir.dot(grad)) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) {
      // No ascent along a fresh gradient direction either: a stationary point
      // to working precision.
      if (h.isApprox(Eigen::MatrixXd::Identity(n, n) * h(0, 0))) {
        out.converged = true;
        break;
      }
      h = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, grad.norm());
      continue;
    }
    normalize(trial);
    const Eigen::VectorXd new_grad = model.gradient(trial);
    // Ascent on L is descent on -L; curvature pair for -L.
    const Eigen::VectorXd s = trial - x;
    const Eigen::VectorXd y = grad - new_grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = v * h * v.transpose() + rho * s * s.transpose();
    }
    const double gain = trial_value - value;
    x = trial;
    value = trial_value;
    grad = new_grad;
    if (gain < options.improvement_tol) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.log_likelihood = value;
  out.estimate = model.state(x);
  out.physical = true;
  return out;
}

ReconstructionResult mle_reconstruct(const CountTable& table,
                                     const std::optional<DensityMatrix>& init,
                                     const MleOptions& options) {
  const auto counts = table.counts_as_double();
  return mle_reconstruct(table.settings, counts, table.exposure, init, options);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw Error(ErrorCode::DimensionMismatch, "fidelity of states with different dimension");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of
  // sqrt(rho) sqrt(sigma). Singular values avoid square-rooting round-off
  // eigenvalues, and swapping the arguments only takes the adjoint.
  const ComplexMatrix a = matrix_sqrt_psd(rho) * matrix_sqrt_psd(sigma);
  const double f = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues().sum();
  return std::clamp(f, 0.0, 1.0);
}

double ErrorBarReport::mean(std::string_view name) const {
  for (std::size_t i = 0; i < quantity_names.size(); ++i)
    if (quantity_names[i] == name) return means[i];
  throw Error(ErrorCode::InvalidConfig, "quantity not in report: " + std::string(name));
}

double ErrorBarReport::std_dev(std::string_view name) const {
  for (std::size_t i = 0; i < quantity_names.size(); ++i)
    if (quantity_names[i] == name) return std_devs[i];
  throw Error(ErrorCode::InvalidConfig, "quantity not in report: " + std::string(name));
}

ErrorBarReport monte_carlo_errors(const DensityMatrix& rho_true,
                                  std::span<const TomographySetting> settings, double exposure,
                                  int n_samples, std::uint64_t seed,
                                  const std::vector<std::string>& quantities,
                                  const MonteCarloOptions& options) {
  if (n_samples < 2) throw Error(ErrorCode::InvalidConfig, "need at least two samples");
  const auto& known = UncertaintyReport::scalar_fields();
  bool needs_report = false;
  for (const auto& q : quantities) {
    if (q == "fidelity") continue;
    if (std::find(known.begin(), known.end(), q) == known.end())
      throw Error(ErrorCode::InvalidConfig, "unknown quantity '" + q + "'");
    needs_report = true;
  }

  struct Sample {
    bool ok = false;
    std::vector<double> values;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(n_samples));
  parallel_for(samples.size(), options.threads, [&](std::size_t i) {
    const CountTable table = simulate_counts(rho_true, settings, exposure, derive_seed(seed, i));
    const ReconstructionResult res = mle_reconstruct(table, std::nullopt, options.mle);
    if (!res.converged) return;
    const DensityMatrix rho_hat = res.density();
    std::optional<UncertaintyReport> report;
    if (needs_report) report = uncertainty_report(rho_hat, options.measurements, options.delta_variant);
    Sample& s = samples[i];
    for (const auto& q : quantities)
      s.values.push_back(q == "fidelity" ? fidelity(rho_hat, rho_true) : report->field(q));
    s.ok = true;
  });

  ErrorBarReport out;
  out.quantity_names = quantities;
  out.means.assign(quantities.size(), 0.0);
  out.std_devs.assign(quantities.size(), 0.0);
  for (const auto& s : samples) {
    if (!s.ok) {
      ++out.n_failed;
      continue;
    }
    ++out.n_samples;
    for (std::size_t q = 0; q < quantities.size(); ++q) out.means[q] += s.values[q];
  }
  if (out.n_samples < 2)
    throw Error(ErrorCode::NoConvergence,
                std::to_string(out.n_failed) + " of " + std::to_string(n_samples) +
                    " reconstructions failed to converge");
  for (auto& m : out.means) m /= out.n_samples;
  for (const auto& s : samples) {
    if (!s.ok) continue;
    for (std::size_t q = 0; q < quantities.size(); ++q) {
      const double d = s.values[q] - out.means[q];
      out.std_devs[q] += d * d;
    }
  }
  for (auto& v : out.std_devs) v = std::sqrt(v / (out.n_samples - 1));
  return out;
}

void write_count_table(std::ostream& out, const CountTable& table) {
  out << "setting_label,basis_a,basis_b,count,exposure,seed\n";
  for (std::size_t i = 0; i < table.settings.size(); ++i) {
    const auto& s = table.settings[i];
    out << s.label() << ',' << polarization_label(s.a) << ',' << polarization_label(s.b) << ','
        << table.counts[i] << ',' << csv::number(table.exposure) << ',' << table.seed << '\n';
  }
}

CountTable read_count_table(std::istream& in) {
  std::string line;
  bool header_seen = false;
  CountTable table;
  bool first_row = true;
  while (std::getline(in, line)) {
    const std::string_view view = csv::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cols = csv::split(view);
    if (!header_seen) {
      const std::vector<std::string> expected = {"setting_label", "basis_a", "basis_b",
                                                 "count",         "exposure", "seed"};
      if (cols != expected) throw Error(ErrorCode::MalformedCsv, "unexpected count table header");
      header_seen = true;
      continue;
    }
    if (cols.size() != 6) throw Error(ErrorCode::MalformedCsv, "expected 6 columns: " + line);
    if (cols[1].size() != 1 || cols[2].size() != 1)
      throw Error(ErrorCode::MalformedCsv, "basis labels must be single letters");
    TomographySetting s{polarization_from_label(cols[1][0]), polarization_from_label(cols[2][0])};
    if (s.label() != cols[0]) throw Error(ErrorCode::MalformedCsv, "label mismatch: " + line);
    const double count = csv::parse_double(cols[3]);
    if (count < 0 || count != std::floor(count))
      throw Error(ErrorCode::MalformedCsv, "count must be a nonnegative integer");
    const double exposure = csv::parse_double(cols[4]);
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(cols[5].data(), cols[5].data() + cols[5].size(), seed);
    if (ec != std::errc{} || end != cols[5].data() + cols[5].size() || cols[5].empty())
      throw Error(ErrorCode::MalformedCsv, "bad seed: " + cols[5]);
    if (first_row) {
      table.exposure = exposure;
      table.seed = seed;
      first_row = false;
    } else if (exposure != table.exposure || seed != table.seed) {
      throw Error(ErrorCode::MalformedCsv, "exposure and seed must be constant across rows");
    }
    table.settings.push_back(s);
    table.counts.push_back(static_cast<std::int64_t>(count));
  }
  if (!header_seen || table.settings.empty())
    throw Error(ErrorCode::MalformedCsv, "empty count table");
  return table;
}

void write_reconstruction(std::ostream& out, const ReconstructionResult& result) {
  out << "# method=" << (result.method == ReconstructionMethod::Mle ? "mle" : "linear")
      << " converged=" << (result.converged ? 1 : 0) << " iterations=" << result.iterations
      << " log_likelihood=" << csv::number(result.log_likelihood) << '\n';
  for (Eigen::Index r = 0; r < result.estimate.rows(); ++r)
    for (Eigen::Index c = 0; c < result.estimate.cols(); ++c) {
      if (r + c > 0) out << ',';
      out << "re_" << r << c << ",im_" << r << c;
    }
  out << '\n';
  for (Eigen::Index r = 0; r < result.estimate.rows(); ++r)
    for (Eigen::Index c = 0; c < result.estimate.cols(); ++c) {
      if (r + c > 0) out << ',';
      out << csv::number(result.estimate(r, c).real()) << ','
          << csv::number(result.estimate(r, c).imag());
    }
  out << '\n';
}

ComplexMatrix read_reconstruction(std::istream& in) {
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    const std::string_view view = csv::trim(line);
    if (view.empty() || view.front() == '#') continue;
    rows.emplace_back(view);
  }
  if (rows.size() != 2) throw Error(ErrorCode::MalformedCsv, "expected header and one data row");
  const auto values = csv::split(rows[1]);
  if (values.size() != 32) throw Error(ErrorCode::MalformedCsv, "expected 32 values");
  ComplexMatrix m(4, 4);
  for (int k = 0; k < 16; ++k)
    m(k / 4, k % 4) = {csv::parse_double(values[2 * k]), csv::parse_double(values[2 * k + 1])};
  return m;
}

}  // namespace qurc
