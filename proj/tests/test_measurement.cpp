#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"

#include "helpers.hpp"
#include "qmplab/errors.hpp"
#include "qmplab/linalg.hpp"
#include "qmplab/measurement.hpp"
#include "qmplab/random_states.hpp"
#include "qmplab/tolerances.hpp"

using namespace qmplab;
using qmplab::test::expect_throw_containing;
using qmplab::test::max_abs_diff;

namespace {

StateVector basis_vector(std::size_t d, std::size_t k) {
  std::vector<Complex> amps(d, Complex(0.0, 0.0));
  amps[k] = Complex(1.0, 0.0);
  return StateVector(std::move(amps));
}

MeasurementModel canonical_model(std::size_t d_e, std::size_t rank, std::uint64_t seed) {
  const StateVector psi1 = basis_vector(2, 0);
  const StateVector psi2 = basis_vector(2, 1);
  const DensityOperator ready = random_mixed(d_e, rank, seed);
  return build_model(2, d_e, psi1, psi2, ready, basis_vector(d_e, 0), basis_vector(d_e, 1));
}

StateVector balanced(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    amps[k] = (a[k] + b[k]) / std::sqrt(2.0);
  }
  return StateVector(std::move(amps));
}

} // namespace

TEST_CASE("model construction produces a unitary with the product-form action") {
  const MeasurementModel model = canonical_model(4, 2, 11);

  CHECK(model.total_dim() == 8);
  CHECK(max_abs_diff(dagger(model.u) * model.u, ComplexMatrix::identity(8)) < 1e-12);

  // each microsystem state stays put while the apparatus shifts to its pointer family
  const SpectralDecomposition& spec = model.ready.spectrum();
  for (std::size_t a = 0; a < 2; ++a) {
    std::vector<Complex> f(4);
    for (std::size_t k = 0; k < 4; ++k) f[k] = spec.eigenvectors(k, a);
    const StateVector fa(std::move(f));

    const std::vector<Complex> out = act(model.u, kron(model.psi1, fa).amplitudes());
    // the output must factor as psi1 (x) (something); check the psi2 block vanishes
    double cross = 0.0;
    for (std::size_t k = 0; k < 4; ++k) cross += std::norm(out[4 + k]);
    CHECK(std::sqrt(cross) < 1e-10);
  }
}

TEST_CASE("model construction rejects impossible dimensions") {
  const StateVector psi1 = basis_vector(2, 0);
  const StateVector psi2 = basis_vector(2, 1);

  // rank 2 needs d_e >= 4
  const DensityOperator ready = random_mixed(3, 2, 5);
  expect_throw_containing<DimensionError>(
      [&] {
        build_model(2, 3, psi1, psi2, ready, basis_vector(3, 0), basis_vector(3, 1));
      },
      "cannot host");
}

TEST_CASE("model construction rejects non-orthogonal inputs") {
  const StateVector psi1 = basis_vector(2, 0);
  const StateVector tilted = StateVector::normalized({Complex(1.0, 0.0), Complex(0.2, 0.0)});
  const DensityOperator ready = random_mixed(4, 1, 5);

  expect_throw_containing<ValidationError>(
      [&] {
        build_model(2, 4, psi1, tilted, ready, basis_vector(4, 0), basis_vector(4, 1));
      },
      "orthogonal");

  const StateVector p_tilted =
      StateVector::normalized({Complex(1.0, 0.0), Complex(0.3, 0.0), Complex(0.0, 0.0),
                               Complex(0.0, 0.0)});
  expect_throw_containing<ValidationError>(
      [&] {
        build_model(2, 4, psi1, basis_vector(2, 1), ready, basis_vector(4, 0), p_tilted);
      },
      "orthogonal");
}

TEST_CASE("model verification catches tampering") {
  MeasurementModel model = canonical_model(4, 1, 21);
  model.u(0, 0) += Complex(1e-3, 0.0);
  expect_throw_containing<ValidationError>([&] { verify_model(model); }, "unitarity");
}

TEST_CASE("evolution preserves trace and spectrum") {
  const MeasurementModel model = canonical_model(4, 2, 31);
  const DensityOperator rho = random_mixed(8, 3, 32);
  const DensityOperator out = evolve(model, rho);

  CHECK(std::abs(trace(out.matrix()) - Complex(1.0, 0.0)) < 1e-12);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(out.spectrum().eigenvalues[k] ==
          doctest::Approx(rho.spectrum().eigenvalues[k]).epsilon(1e-10));
  }
}

TEST_CASE("square-root scalar product on pure states equals the squared inner product") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = 2 + seed % 7;
    const StateVector x = random_pure(d, derive_seed(900, 2 * seed));
    const StateVector y = random_pure(d, derive_seed(900, 2 * seed + 1));
    const double direct = std::norm(inner(x, y));
    CHECK(std::abs(sqrt_overlap(pure_projector(x), pure_projector(y)) - direct) < 1e-12);
  }
}

TEST_CASE("square-root scalar product is symmetric and normalized") {
  const DensityOperator a = random_mixed(5, 3, 51);
  const DensityOperator b = random_mixed(5, 2, 52);
  const double ab = sqrt_overlap(a, b);
  CHECK(ab == sqrt_overlap(b, a));
  CHECK(ab >= 0.0);
  CHECK(ab <= 1.0);
  CHECK(sqrt_overlap(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("configuration regions have orthogonal anchors and radius epsilon over two") {
  const MeasurementModel model = canonical_model(6, 2, 61);
  const ConfigurationRegions regions = make_regions(model, 0.2);

  CHECK(regions.radius == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(sqrt_overlap(regions.anchor1, regions.anchor2) < 1e-10);

  expect_throw_containing<ParameterError>([&] { make_regions(model, 0.0); }, "epsilon");
  expect_throw_containing<ParameterError>([&] { make_regions(model, 0.5); }, "epsilon");
}

TEST_CASE("classification of anchors and of the balanced superposition") {
  const MeasurementModel model = canonical_model(4, 2, 71);
  const ConfigurationRegions regions = make_regions(model, 0.1);

  const Classification c1 = classify(regions.anchor1, regions);
  CHECK(c1.label == Label::Config1);
  CHECK(c1.distance1 < 1e-9);
  CHECK(c1.overlap2 < 1e-9);

  const Classification c2 = classify(regions.anchor2, regions);
  CHECK(c2.label == Label::Config2);

  const StateVector phi = balanced(model.psi1, model.psi2);
  const DensityOperator evolved = evolve(model, make_density(kron(
      pure_projector(phi).matrix(), model.ready.matrix())));
  const Classification cc = classify(evolved, regions);
  CHECK(cc.label == Label::Indefinite);
  CHECK(cc.overlap1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cc.overlap2 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("members of the two balls keep their scalar product below epsilon") {
  const MeasurementModel model = canonical_model(4, 1, 81);
  for (double epsilon : {0.05, 0.1, 0.3}) {
    const ConfigurationRegions regions = make_regions(model, epsilon);
    std::uint64_t accepted = 0;
    for (std::uint64_t seed = 0; accepted < 10 && seed < 200; ++seed) {
      const DensityOperator s1 =
          perturb_density(regions.anchor1, epsilon * epsilon / 16.0, derive_seed(82, seed));
      const DensityOperator s2 =
          perturb_density(regions.anchor2, epsilon * epsilon / 16.0, derive_seed(83, seed));
      const Classification k1 = classify(s1, regions);
      const Classification k2 = classify(s2, regions);
      if (k1.label != Label::Config1 || k2.label != Label::Config2) continue;
      ++accepted;
      CHECK(sqrt_overlap(s1, s2) < epsilon);
    }
    CHECK(accepted == 10);
  }
}

TEST_CASE("pure-state classification matches the density route") {
  const StateVector a1 = basis_vector(3, 0);
  const StateVector a2 = basis_vector(3, 1);
  const double epsilon = 0.2;

  const Classification on_anchor = classify_pure(a1, a1, a2, epsilon);
  CHECK(on_anchor.label == Label::Config1);
  CHECK(on_anchor.overlap1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(on_anchor.distance1 < 1e-7);

  const StateVector mid = balanced(a1, a2);
  const Classification between = classify_pure(mid, a1, a2, epsilon);
  CHECK(between.label == Label::Indefinite);
  CHECK(between.overlap1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(between.overlap2 == doctest::Approx(0.5).epsilon(1e-14));

  // both routes agree on random states
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StateVector x = random_pure(3, derive_seed(84, seed));
    const Classification vec = classify_pure(x, a1, a2, epsilon);

    ConfigurationRegions regions{epsilon, pure_projector(a1), pure_projector(a2),
                                 epsilon / 2.0};
    const Classification dens = classify(pure_projector(x), regions);
    CHECK(vec.label == dens.label);
    CHECK(vec.overlap1 == doctest::Approx(dens.overlap1).epsilon(1e-10));
    CHECK(vec.distance1 == doctest::Approx(dens.distance1).epsilon(1e-7));
  }
}

TEST_CASE("orthogonal sharp projections force orthogonal states") {
  const std::size_t d = 4;
  ComplexMatrix p1(d, d), p2(d, d);
  p1(0, 0) = p1(1, 1) = Complex(1.0, 0.0);
  p2(2, 2) = p2(3, 3) = Complex(1.0, 0.0);

  ComplexMatrix m1(d, d), m2(d, d);
  m1(0, 0) = Complex(0.7, 0.0);
  m1(1, 1) = Complex(0.3, 0.0);
  m2(2, 2) = Complex(1.0, 0.0);

  const double overlap = sharp_projection_check(p1, p2, make_density(m1), make_density(m2));
  CHECK(overlap < 1e-12);
}

TEST_CASE("sharp projection gates") {
  const std::size_t d = 2;
  ComplexMatrix p1(d, d), p2(d, d);
  p1(0, 0) = Complex(1.0, 0.0);
  p2(1, 1) = Complex(1.0, 0.0);
  ComplexMatrix m1(d, d), m2(d, d);
  m1(0, 0) = Complex(1.0, 0.0);
  m2(1, 1) = Complex(1.0, 0.0);
  const DensityOperator rho1 = make_density(m1);
  const DensityOperator rho2 = make_density(m2);

  ComplexMatrix not_idempotent = p1 * Complex(0.5, 0.0);
  expect_throw_containing<ValidationError>(
      [&] { sharp_projection_check(not_idempotent, p2, rho1, rho2); }, "idempotent");

  expect_throw_containing<ValidationError>(
      [&] { sharp_projection_check(p1, p1, rho1, rho2); }, "disjoint");

  expect_throw_containing<ValidationError>(
      [&] { sharp_projection_check(p1, p2, rho2, rho1); }, "expected 1");
}

TEST_CASE("unsharp effects with certain outcomes force orthogonal states") {
  // e1 has a free middle eigenvalue; certainty only pins the extreme blocks
  const std::vector<double> evals = {1.0, 1.0, 0.3, 0.0};
  const ComplexMatrix e1 = ComplexMatrix::diagonal(evals);

  ComplexMatrix m1(4, 4), m2(4, 4);
  m1(0, 0) = Complex(0.4, 0.0);
  m1(1, 1) = Complex(0.6, 0.0);
  m2(3, 3) = Complex(1.0, 0.0);
  const DensityOperator rho1 = make_density(m1);
  const DensityOperator rho2 = make_density(m2);

  CHECK(effect_pair_check(e1, rho1, rho2) < 1e-12);
  CHECK(effect_eigenvector_deviation(e1, rho1, rho2) < 1e-12);
}

TEST_CASE("unsharp effect gates") {
  const std::vector<double> outside = {1.2, 0.0};
  ComplexMatrix m1(2, 2), m2(2, 2);
  m1(0, 0) = Complex(1.0, 0.0);
  m2(1, 1) = Complex(1.0, 0.0);
  expect_throw_containing<ValidationError>(
      [&] { effect_pair_check(ComplexMatrix::diagonal(outside), make_density(m1),
                              make_density(m2)); },
      "bounds");

  const std::vector<double> leaky = {0.9, 0.0};
  expect_throw_containing<ValidationError>(
      [&] { effect_pair_check(ComplexMatrix::diagonal(leaky), make_density(m1),
                              make_density(m2)); },
      "expected 1");
}

TEST_CASE("rotated unsharp scenario keeps the orthogonality conclusion") {
  // conjugate a diagonal effect by a random unitary so nothing is axis-aligned
  const std::size_t d = 5;
  const ComplexMatrix v = random_unitary(d, 91);
  const std::vector<double> evals = {1.0, 1.0, 0.55, 0.2, 0.0};
  const ComplexMatrix e1 = v * ComplexMatrix::diagonal(evals) * dagger(v);

  ComplexMatrix block1(d, d), block2(d, d);
  block1(0, 0) = Complex(0.25, 0.0);
  block1(1, 1) = Complex(0.75, 0.0);
  block2(4, 4) = Complex(1.0, 0.0);
  const DensityOperator rho1 = make_density(v * block1 * dagger(v));
  const DensityOperator rho2 = make_density(v * block2 * dagger(v));

  CHECK(effect_pair_check(e1, rho1, rho2) < 1e-9);
  CHECK(effect_eigenvector_deviation(e1, rho1, rho2) < 1e-9);
}
