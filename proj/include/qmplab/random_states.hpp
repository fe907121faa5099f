#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "qmplab/complex_matrix.hpp"
#include "qmplab/density_operator.hpp"
#include "qmplab/state_vector.hpp"

namespace qmplab {

// Seeded generator with a pinned Gaussian transform. std::mt19937_64 has a
// standardized algorithm, but std::normal_distribution does not, so the
// Gaussian step is a local Box-Muller: identical seeds give bit-identical
// streams on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal.
  double gaussian();

  // Independent standard normal real and imaginary parts.
  Complex complex_gaussian();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Decorrelated per-stream seed: mixes the stream index into the base seed
// through a splitmix64-style finalizer, so parallel or reordered sample
// evaluation sees the same substreams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Haar-distributed unit vector: d independent complex Gaussians, normalized.
StateVector random_pure(std::size_t d, std::uint64_t seed);

// Ginibre construction G G^dagger / Tr(G G^dagger) with G complex Gaussian
// of shape d x rank; the result has the requested rank generically.
DensityOperator random_mixed(std::size_t d, std::size_t rank, std::uint64_t seed);

// Convex mix with a random full-rank state, scaled so the HS distance from
// rho stays at most delta; actual distances spread over (0, delta].
DensityOperator perturb_density(const DensityOperator& rho, double delta, std::uint64_t seed);

// Gram-Schmidt on a square complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed);

} // namespace qmplab
