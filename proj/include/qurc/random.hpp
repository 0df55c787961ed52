#pragma once

// Seeded random streams. Only the Mersenne engine comes from <random>; the
// distributions are spelled out here so that draws are identical across
// standard library implementations.

#include <cmath>
#include <cstdint>
#include <random>

#include "qurc/qla.hpp"

namespace qurc {

/// splitmix64 finalizer; derives independent per-task seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller, consuming two uniforms per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Poisson draw: inversion below mean 30, rounded normal approximation
  /// (clamped at zero) above.
  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 30.0) {
      const double u = uniform();
      double p = std::exp(-mean);
      double cdf = p;
      std::int64_t k = 0;
      while (u > cdf && k < 1000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
      }
      return k;
    }
    const double x = std::round(mean + std::sqrt(mean) * normal());
    return x < 0.0 ? 0 : static_cast<std::int64_t>(x);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Haar-random unit vector (normalized complex Gaussian).
inline ComplexVector haar_random_ket(Eigen::Index dim, Rng& rng) {
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = {rng.normal(), rng.normal()};
  return v / v.norm();
}

/// Mixed state on dims {da, db} from tracing a Haar-random pure state on
/// (da * db) x k down to its first factor.
inline DensityMatrix random_mixed_state(int da, int db, int k, Rng& rng) {
  const ComplexVector psi = haar_random_ket(static_cast<Eigen::Index>(da) * db * k, rng);
  const ComplexMatrix reduced = partial_trace(outer<double>(psi), {da * db, k}, 0);
  return project_to_density(reduced, {da, db});
}

/// Hermitian matrix with independent Gaussian entries.
inline ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = {rng.normal(), rng.normal()};
  return (m + m.adjoint()) / 2.0;
}

}  // namespace qurc
