#pragma once

#include <cstddef>
#include <vector>

#include "qmplab/complex_matrix.hpp"
#include "qmplab/tolerances.hpp"

namespace qmplab {

// Unit vector in C^d. The constructor enforces the norm gate; callers with
// unnormalized amplitudes go through StateVector::normalized.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes, double tol = kInputTol);

  // Scales the amplitudes to unit norm. Rejects near-zero input.
  static StateVector normalized(std::vector<Complex> amplitudes);

  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

 private:
  struct Unchecked {};
  StateVector(std::vector<Complex> amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}

  std::vector<Complex> amps_;
};

// Conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

// Tensor product; index convention matches the matrix kron, so
// pure_projector(kron(a, b)) equals kron of the projectors.
StateVector kron(const StateVector& a, const StateVector& b);

// Euclidean distance between amplitude vectors.
double distance(const StateVector& a, const StateVector& b);

} // namespace qmplab
