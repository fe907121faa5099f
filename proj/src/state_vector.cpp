#include "qmplab/state_vector.hpp"

#include <cmath>
#include <string>

#include "qmplab/errors.hpp"

namespace qmplab {

namespace {

double norm2(const std::vector<Complex>& amps) {
  double out = 0.0;
  for (const Complex& a : amps) {
    out += std::norm(a);
  }
  return out;
}

} // namespace

StateVector::StateVector(std::vector<Complex> amplitudes, double tol)
    : amps_(std::move(amplitudes)) {
  if (amps_.empty()) {
    throw DimensionError("StateVector: dimension must be positive");
  }
  const double nrm = std::sqrt(norm2(amps_));
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > tol) {
    throw ValidationError("StateVector: normalization check failed, norm = " +
                          std::to_string(nrm));
  }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  if (amplitudes.empty()) {
    throw DimensionError("StateVector: dimension must be positive");
  }
  const double nrm = std::sqrt(norm2(amplitudes));
  if (!std::isfinite(nrm) || nrm < 1e-12) {
    throw ValidationError("StateVector: cannot normalize a near-zero vector, norm = " +
                          std::to_string(nrm));
  }
  for (Complex& a : amplitudes) {
    a /= nrm;
  }
  return StateVector(std::move(amplitudes), Unchecked{});
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  Complex out(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out += std::conj(a[i]) * b[i];
  }
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t k = 0; k < b.dim(); ++k) {
      amps[i * b.dim() + k] = a[i] * b[k];
    }
  }
  // Product of unit vectors is a unit vector; accumulated round-off stays
  // far below the constructor gate.
  return StateVector(std::move(amps));
}

double distance(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("distance: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out += std::norm(a[i] - b[i]);
  }
  return std::sqrt(out);
}

} // namespace qmplab
