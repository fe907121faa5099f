#include "qmplab/random_states.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qmplab/errors.hpp"

namespace qmplab {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Basic Box-Muller; 1 - uniform() keeps the argument of log positive.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StateVector random_pure(std::size_t d, std::uint64_t seed) {
  if (d == 0) {
    throw ParameterError("random_pure: dimension must be positive");
  }
  Rng rng(seed);
  std::vector<Complex> amps(d);
  while (true) {
    double nrm2 = 0.0;
    for (Complex& a : amps) {
      a = rng.complex_gaussian();
      nrm2 += std::norm(a);
    }
    if (nrm2 > 1e-24) {
      break; // redraw on the (measure-zero) degenerate draw
    }
  }
  return StateVector::normalized(std::move(amps));
}

DensityOperator random_mixed(std::size_t d, std::size_t rank, std::uint64_t seed) {
  if (d == 0) {
    throw ParameterError("random_mixed: dimension must be positive");
  }
  if (rank < 1 || rank > d) {
    throw ParameterError("random_mixed: rank " + std::to_string(rank) +
                         " outside [1, " + std::to_string(d) + "]");
  }
  Rng rng(seed);
  while (true) {
    ComplexMatrix g(d, rank);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < rank; ++j) {
        g(i, j) = rng.complex_gaussian();
      }
    }
    ComplexMatrix m = g * dagger(g);
    const double tr = trace(m).real();
    if (tr < 1e-12) {
      continue; // degenerate draw, try again
    }
    m *= Complex(1.0 / tr, 0.0);
    return make_density(m);
  }
}

DensityOperator perturb_density(const DensityOperator& rho, double delta, std::uint64_t seed) {
  if (!(delta > 0.0)) {
    throw ParameterError("perturb_density: delta must be positive, got " +
                         std::to_string(delta));
  }
  const DensityOperator sigma = random_mixed(rho.dim(), rho.dim(), derive_seed(seed, 0));
  const ComplexMatrix diff = sigma.matrix() - rho.matrix();
  const double dist = hs_norm(diff);
  if (dist < 1e-15) {
    return make_density(rho.matrix());
  }
  Rng rng(derive_seed(seed, 1));
  // t * dist = min(dist, u * delta) <= delta, so the mix stays in the ball;
  // the uniform factor spreads the actual distances instead of pinning them
  // to the boundary.
  const double t = std::min(1.0, rng.uniform() * delta / dist);
  const ComplexMatrix mixed = rho.matrix() + diff * Complex(t, 0.0);
  return make_density(mixed);
}

ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed) {
  if (d == 0) {
    throw ParameterError("random_unitary: dimension must be positive");
  }
  Rng rng(seed);
  std::vector<std::vector<Complex>> cols;
  cols.reserve(d);
  while (cols.size() < d) {
    std::vector<Complex> v(d);
    for (Complex& c : v) {
      c = rng.complex_gaussian();
    }
    // Two orthogonalization sweeps against the accepted columns.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& b : cols) {
        Complex ip(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
          ip += std::conj(b[i]) * v[i];
        }
        for (std::size_t i = 0; i < d; ++i) {
          v[i] -= ip * b[i];
        }
      }
    }
    double nrm2 = 0.0;
    for (const Complex& c : v) {
      nrm2 += std::norm(c);
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm < 1e-8) {
      continue; // nearly dependent draw, take a fresh one
    }
    for (Complex& c : v) {
      c /= nrm;
    }
    cols.push_back(std::move(v));
  }
  ComplexMatrix u(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      u(i, k) = cols[k][i];
    }
  }
  return u;
}

} // namespace qmplab
