#pragma once

#include <cstddef>
#include <string>

#include "json.hpp"

#include "qmplab/complex_matrix.hpp"
#include "qmplab/linalg.hpp"
#include "qmplab/state_vector.hpp"
#include "qmplab/tolerances.hpp"

namespace qmplab {

// Hermitian, positive-semidefinite, trace-one operator. Construction runs
// the full validation gate and caches the spectral decomposition (clipped to
// [0,1]) together with the PSD square root, so downstream geometry never
// recomputes an eigensystem for the same state.
class DensityOperator {
 public:
  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  const ComplexMatrix& sqrt_matrix() const { return sqrt_; }

 private:
  friend DensityOperator make_density(const ComplexMatrix& m, double tol);

  DensityOperator() = default;

  ComplexMatrix matrix_;
  SpectralDecomposition spectrum_;
  ComplexMatrix sqrt_;
};

// Validation gate: hermiticity, eigenvalues >= -tol, trace within tol of 1.
// Eigenvalues are clipped to [0,1] after validation.
DensityOperator make_density(const ComplexMatrix& m, double tol = kConstructTol);

// Rank-1 projector v v^dagger.
DensityOperator pure_projector(const StateVector& v);

// Tr(rho^2), computed from the cached spectrum.
double purity(const DensityOperator& rho);

// Purity above 1 - kPurityGap.
bool is_pure(const DensityOperator& rho);

// The unique PSD square root; lies on the HS unit sphere.
const ComplexMatrix& sqrt_state(const DensityOperator& rho);

// Interchange form: the matrix object plus {"kind":"density"}. Loading
// re-runs the full validation gate.
std::string density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const nlohmann::json& j);

} // namespace qmplab
