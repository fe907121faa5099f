#include "qmplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "qmplab/errors.hpp"

namespace qmplab {

namespace {

using EigenCM = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenCM to_eigen(const ComplexMatrix& m) {
  EigenCM out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  std::copy(m.data().begin(), m.data().end(), out.data());
  return out;
}

} // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
  const std::size_t d = eigenvectors.rows();
  ComplexMatrix out(d, d);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    const double lambda = eigenvalues[k];
    for (std::size_t i = 0; i < d; ++i) {
      const Complex vi = eigenvectors(i, k);
      for (std::size_t j = 0; j < d; ++j) {
        out(i, j) += lambda * vi * std::conj(eigenvectors(j, k));
      }
    }
  }
  return out;
}

SpectralDecomposition herm_eig(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) {
    throw DimensionError("herm_eig: matrix is not square");
  }
  const double herm_defect = hs_norm(h - dagger(h));
  if (herm_defect > tol) {
    throw ValidationError("herm_eig: hermiticity check failed, ||h - h^dagger|| = " +
                          std::to_string(herm_defect));
  }

  // Work on the exactly Hermitian average so the backend sees a clean input.
  const ComplexMatrix sym = (h + dagger(h)) * Complex(0.5, 0.0);
  Eigen::SelfAdjointEigenSolver<EigenCM> solver(to_eigen(sym));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver did not converge");
  }

  const std::size_t d = h.rows();
  SpectralDecomposition result;
  result.eigenvalues.resize(d);
  result.eigenvectors = ComplexMatrix(d, d);

  // Eigen returns ascending order; emit descending.
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t src = d - 1 - k;
    result.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(src));
    for (std::size_t i = 0; i < d; ++i) {
      result.eigenvectors(i, k) =
          solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(src));
    }
  }
  return result;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m, double clip_tol) {
  SpectralDecomposition eig = herm_eig(m);
  for (double& lambda : eig.eigenvalues) {
    if (lambda < -clip_tol) {
      throw ValidationError("sqrt_psd: negativity check failed, eigenvalue " +
                            std::to_string(lambda) + " below -" + std::to_string(clip_tol));
    }
    // Magnitudes below clip_tol are solver round-off on a zero eigenvalue.
    // Taking their square root would promote 1e-16 noise to 1e-8 along an
    // arbitrary eigendirection, so they clip to an exact zero instead.
    lambda = lambda <= clip_tol ? 0.0 : std::sqrt(lambda);
  }
  return eig.reconstruct();
}

ComplexMatrix complete_unitary(std::size_t dim, std::span<const std::vector<Complex>> columns,
                               double tol) {
  if (dim == 0) {
    throw DimensionError("complete_unitary: dimension must be positive");
  }
  if (columns.size() > dim) {
    throw DimensionError("complete_unitary: more columns than the dimension admits");
  }

  std::vector<std::vector<Complex>> basis;
  basis.reserve(dim);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto& col = columns[k];
    if (col.size() != dim) {
      throw DimensionError("complete_unitary: column " + std::to_string(k) + " has length " +
                           std::to_string(col.size()) + ", expected " + std::to_string(dim));
    }
    double nrm2 = 0.0;
    for (const Complex& c : col) {
      nrm2 += std::norm(c);
    }
    if (std::abs(nrm2 - 1.0) > tol) {
      throw ValidationError("complete_unitary: orthonormality check failed, column " +
                            std::to_string(k) + " has norm deviation " +
                            std::to_string(std::abs(std::sqrt(nrm2) - 1.0)));
    }
    for (std::size_t j = 0; j < k; ++j) {
      Complex ip(0.0, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        ip += std::conj(columns[j][i]) * col[i];
      }
      if (std::abs(ip) > tol) {
        throw ValidationError("complete_unitary: orthonormality check failed, columns " +
                              std::to_string(j) + " and " + std::to_string(k) +
                              " overlap by " + std::to_string(std::abs(ip)));
      }
    }
    basis.push_back(col);
  }

  // Fill the remaining columns from canonical basis vectors, lowest index
  // first. Two orthogonalization sweeps keep the loss of orthogonality at
  // the round-off level even for nearly dependent candidates.
  for (std::size_t cand = 0; cand < dim && basis.size() < dim; ++cand) {
    std::vector<Complex> v(dim, Complex(0.0, 0.0));
    v[cand] = Complex(1.0, 0.0);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& b : basis) {
        Complex ip(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
          ip += std::conj(b[i]) * v[i];
        }
        for (std::size_t i = 0; i < dim; ++i) {
          v[i] -= ip * b[i];
        }
      }
    }
    double nrm2 = 0.0;
    for (const Complex& c : v) {
      nrm2 += std::norm(c);
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm <= tol) {
      continue; // candidate already spanned
    }
    for (Complex& c : v) {
      c /= nrm;
    }
    basis.push_back(std::move(v));
  }

  if (basis.size() < dim) {
    throw NumericalError("complete_unitary: could not extend to a full basis");
  }

  ComplexMatrix u(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      u(i, k) = basis[k][i];
    }
  }
  return u;
}

} // namespace qmplab
