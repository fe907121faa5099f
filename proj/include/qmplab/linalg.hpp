#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmplab/complex_matrix.hpp"
#include "qmplab/tolerances.hpp"

namespace qmplab {

// Eigensystem of a Hermitian matrix. Eigenvalues are sorted descending;
// eigenvectors are the matching orthonormal columns of `eigenvectors`.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  // Sum of eigenvalue-weighted projectors; equals the source within tolerance.
  ComplexMatrix reconstruct() const;
};

// Hermitian eigendecomposition. Rejects inputs with ||h - h^dagger||_HS > tol.
// Ties between equal eigenvalues keep the solver's output order, so the
// result is deterministic for identical input bits.
SpectralDecomposition herm_eig(const ComplexMatrix& h, double tol = kConstructTol);

// Unique PSD square root of a Hermitian PSD matrix. Eigenvalues in
// [-clip_tol, 0) are treated as round-off and clipped to zero; anything
// below -clip_tol raises ValidationError. The re-squared result matches the
// input within a tolerance proportional to clip_tol.
ComplexMatrix sqrt_psd(const ComplexMatrix& m, double clip_tol = kClipTol);

// Extends mutually orthonormal columns to a full dim x dim unitary. The
// missing columns come from Gram-Schmidt over the canonical basis, taking
// the lowest-index candidate whose residual norm exceeds tol first. An empty
// column list yields the identity.
ComplexMatrix complete_unitary(std::size_t dim, std::span<const std::vector<Complex>> columns,
                               double tol = kInputTol);

} // namespace qmplab
