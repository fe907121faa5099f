#include "qmplab/density_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmplab/errors.hpp"
#include "qmplab/matrix_json.hpp"

namespace qmplab {

DensityOperator make_density(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) {
    throw DimensionError("make_density: matrix is not square");
  }
  if (!all_finite(m)) {
    throw ValidationError("make_density: finiteness check failed");
  }
  const double herm_defect = hs_norm(m - dagger(m));
  if (herm_defect > tol) {
    throw ValidationError("make_density: hermiticity check failed, ||m - m^dagger|| = " +
                          std::to_string(herm_defect));
  }
  const Complex tr = trace(m);
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw ValidationError("make_density: trace check failed, Tr = " +
                          std::to_string(tr.real()) + " + " + std::to_string(tr.imag()) + "i");
  }

  SpectralDecomposition spec = herm_eig(m, tol);
  for (double& lambda : spec.eigenvalues) {
    if (lambda < -tol) {
      throw ValidationError("make_density: negativity check failed, eigenvalue = " +
                            std::to_string(lambda));
    }
    // Same clipping rule as sqrt_psd: magnitudes below kClipTol are round-off
    // on a zero eigenvalue and become exact zeros, which keeps the cached
    // square root free of sqrt(noise) contributions on rank-deficient states.
    lambda = lambda <= kClipTol ? 0.0 : std::min(lambda, 1.0);
  }

  DensityOperator rho;
  rho.matrix_ = m;
  rho.spectrum_ = std::move(spec);

  // Square root from the clipped spectrum; shares the eigenvectors, so
  // (sqrt)^2 reproduces the clipped operator exactly up to round-off.
  SpectralDecomposition root = rho.spectrum_;
  for (double& lambda : root.eigenvalues) {
    lambda = std::sqrt(lambda);
  }
  rho.sqrt_ = root.reconstruct();
  return rho;
}

DensityOperator pure_projector(const StateVector& v) {
  const std::size_t d = v.dim();
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(i, j) = v[i] * std::conj(v[j]);
    }
  }
  return make_density(m);
}

double purity(const DensityOperator& rho) {
  double out = 0.0;
  for (double lambda : rho.spectrum().eigenvalues) {
    out += lambda * lambda;
  }
  return out;
}

bool is_pure(const DensityOperator& rho) { return purity(rho) >= 1.0 - kPurityGap; }

const ComplexMatrix& sqrt_state(const DensityOperator& rho) { return rho.sqrt_matrix(); }

std::string density_to_json(const DensityOperator& rho) {
  std::string body = matrix_to_json(rho.matrix());
  body.insert(1, "\"kind\":\"density\",");
  return body;
}

DensityOperator density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string() ||
      j["kind"].get<std::string>() != "density") {
    throw ValidationError("density_from_json: expected an object with \"kind\":\"density\"");
  }
  return make_density(matrix_from_json(j));
}

} // namespace qmplab
