#include <cmath>
#include <vector>

#include "doctest.h"

#include "helpers.hpp"
#include "qmplab/complex_matrix.hpp"
#include "qmplab/errors.hpp"
#include "qmplab/linalg.hpp"
#include "qmplab/random_states.hpp"

using namespace qmplab;
using qmplab::test::expect_throw_containing;
using qmplab::test::max_abs_diff;

namespace {

ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      g(i, j) = rng.complex_gaussian();
    }
  }
  const ComplexMatrix h = (g + dagger(g)) * Complex(0.5, 0.0);
  return h;
}

ComplexMatrix random_psd(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      g(i, j) = rng.complex_gaussian();
    }
  }
  return g * dagger(g);
}

} // namespace

TEST_CASE("eigendecomposition of a fixed 2x2 matrix") {
  const ComplexMatrix h = ComplexMatrix::from_rows({{0.6, 0.2}, {0.2, 0.4}});
  const SpectralDecomposition eig = herm_eig(h);
  REQUIRE(eig.eigenvalues.size() == 2);
  // roots of l^2 - l + 0.2: (1 +- sqrt(0.2)) / 2
  CHECK(eig.eigenvalues[0] == doctest::Approx(0.72360679774997896).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.27639320225002104).epsilon(1e-14));
  CHECK(max_abs_diff(eig.reconstruct(), h) < 1e-14);
}

TEST_CASE("eigendecomposition properties on random hermitian input") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const std::size_t d = 2 + 3 * seed;
    const ComplexMatrix h = random_hermitian(d, seed);
    const SpectralDecomposition eig = herm_eig(h);
    REQUIRE(eig.eigenvalues.size() == d);

    for (std::size_t k = 0; k + 1 < d; ++k) {
      CHECK(eig.eigenvalues[k] >= eig.eigenvalues[k + 1]);
    }
    CHECK(max_abs_diff(dagger(eig.eigenvectors) * eig.eigenvectors,
                       ComplexMatrix::identity(d)) < 1e-12);
    CHECK(max_abs_diff(eig.reconstruct(), h) < 1e-12);

    double sum = 0.0;
    for (double v : eig.eigenvalues) sum += v;
    CHECK(sum == doctest::Approx(trace(h).real()).epsilon(1e-12));
  }
}

TEST_CASE("eigendecomposition input gates") {
  expect_throw_containing<DimensionError>([] { herm_eig(ComplexMatrix(2, 3)); }, "square");

  ComplexMatrix skew(2, 2);
  skew(0, 1) = Complex(1.0, 0.0);
  skew(1, 0) = Complex(-1.0, 0.0);
  expect_throw_containing<ValidationError>([&] { herm_eig(skew); }, "hermiticity");
}

TEST_CASE("square root of a fixed diagonal matrix") {
  const std::vector<double> diag = {0.25, 0.75};
  const ComplexMatrix root = sqrt_psd(ComplexMatrix::diagonal(diag));
  CHECK(std::abs(root(0, 0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(root(1, 1) - Complex(0.8660254037844386, 0.0)) < 1e-15);
  CHECK(std::abs(root(0, 1)) < 1e-15);
  CHECK(std::abs(root(1, 0)) < 1e-15);
}

TEST_CASE("square root re-squares to the input") {
  for (std::uint64_t seed = 10; seed <= 12; ++seed) {
    const std::size_t d = 4 * (seed - 9);
    const ComplexMatrix m = random_psd(d, seed);
    const ComplexMatrix root = sqrt_psd(m);
    CHECK(max_abs_diff(root, dagger(root)) < 1e-12);
    CHECK(max_abs_diff(root * root, m) < 1e-10 * hs_norm(m));
  }
}

TEST_CASE("square root clips round-off negatives but rejects real ones") {
  const std::vector<double> tiny = {1.0, -1e-12};
  const ComplexMatrix root = sqrt_psd(ComplexMatrix::diagonal(tiny));
  CHECK(std::abs(root(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(root(1, 1)) < 1e-6);

  const std::vector<double> negative = {1.0, -0.5};
  expect_throw_containing<ValidationError>(
      [&] { sqrt_psd(ComplexMatrix::diagonal(negative)); }, "negativity");
}

TEST_CASE("square root commutes with its argument") {
  const ComplexMatrix m = random_psd(6, 77);
  const ComplexMatrix root = sqrt_psd(m);
  CHECK(max_abs_diff(root * m, m * root) < 1e-10);
}

TEST_CASE("unitary completion from no columns is the identity") {
  const std::vector<std::vector<Complex>> none;
  const ComplexMatrix u = complete_unitary(4, none);
  CHECK(max_abs_diff(u, ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("unitary completion preserves the given columns") {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<Complex>> cols;
  cols.push_back({Complex(s, 0.0), Complex(0.0, s), Complex(0.0, 0.0)});
  cols.push_back({Complex(s, 0.0), Complex(0.0, -s), Complex(0.0, 0.0)});

  const ComplexMatrix u = complete_unitary(3, cols);
  CHECK(max_abs_diff(dagger(u) * u, ComplexMatrix::identity(3)) < 1e-12);
  CHECK(max_abs_diff(u * dagger(u), ComplexMatrix::identity(3)) < 1e-12);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(u(i, j) - cols[j][i]) < 1e-14);
    }
  }
}

TEST_CASE("unitary completion is deterministic and exhaustive") {
  Rng rng(99);
  std::vector<Complex> v(5);
  double norm2 = 0.0;
  for (Complex& c : v) {
    c = rng.complex_gaussian();
    norm2 += std::norm(c);
  }
  for (Complex& c : v) c /= std::sqrt(norm2);

  std::vector<std::vector<Complex>> cols = {v};
  const ComplexMatrix u1 = complete_unitary(5, cols);
  const ComplexMatrix u2 = complete_unitary(5, cols);
  CHECK(qmplab::test::bitwise_equal(u1, u2));
  CHECK(max_abs_diff(dagger(u1) * u1, ComplexMatrix::identity(5)) < 1e-12);
}

TEST_CASE("unitary completion input gates") {
  std::vector<std::vector<Complex>> bad_len = {{Complex(1.0, 0.0)}};
  expect_throw_containing<DimensionError>([&] { complete_unitary(3, bad_len); }, "length");

  std::vector<std::vector<Complex>> not_normalized = {
      {Complex(2.0, 0.0), Complex(0.0, 0.0)}};
  expect_throw_containing<ValidationError>([&] { complete_unitary(2, not_normalized); },
                                           "orthonormality");

  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<Complex>> not_orthogonal = {
      {Complex(1.0, 0.0), Complex(0.0, 0.0)},
      {Complex(s, 0.0), Complex(s, 0.0)}};
  expect_throw_containing<ValidationError>([&] { complete_unitary(2, not_orthogonal); },
                                           "orthonormality");

  std::vector<std::vector<Complex>> too_many = {
      {Complex(1.0, 0.0)}, {Complex(0.0, 1.0)}};
  expect_throw_containing<DimensionError>([&] { complete_unitary(1, too_many); }, "columns");
}
