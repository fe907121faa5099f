#include "qmplab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qmplab/errors.hpp"
#include "qmplab/linalg.hpp"
#include "qmplab/matrix_json.hpp"
#include "qmplab/random_states.hpp"

namespace qmplab {

namespace {

// Stream tags keeping the derived seed spaces of the experiment phases
// disjoint. Sample k of a phase uses derive_seed(phase_seed, k).
constexpr std::uint64_t kStreamModel = 1;
constexpr std::uint64_t kStreamSweep = 2;
constexpr std::uint64_t kStreamPremise = 3;
constexpr std::uint64_t kStreamPairs = 4;
constexpr std::uint64_t kStreamSharp = 5;
constexpr std::uint64_t kStreamUnsharp = 6;

// The audit size for the product-state premise, independent of the sweep
// sample count.
constexpr std::size_t kPremiseSamples = 100;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Unit vector orthogonal to v, drawn from the seeded Haar sampler and
// orthogonalized; retries deterministically on near-parallel draws.
StateVector orthonormal_partner(const StateVector& v, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const StateVector w = random_pure(v.dim(), derive_seed(seed, attempt));
    const Complex ip = inner(v, w);
    std::vector<Complex> amps = w.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      amps[i] -= ip * v[i];
    }
    double nrm2 = 0.0;
    for (const Complex& c : amps) {
      nrm2 += std::norm(c);
    }
    if (nrm2 > 1e-12) {
      return StateVector::normalized(std::move(amps));
    }
  }
}

StateVector balanced_superposition(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    amps[i] = a[i] + b[i];
  }
  return StateVector::normalized(std::move(amps));
}

std::vector<Complex> kron_vec(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      out[i * b.size() + k] = a[i] * b[k];
    }
  }
  return out;
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex out(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += std::conj(a[i]) * b[i];
  }
  return out;
}

std::vector<Complex> column(const ComplexMatrix& m, std::size_t k) {
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out[i] = m(i, k);
  }
  return out;
}

ComplexMatrix gaussian_matrix(std::size_t d, Rng& rng) {
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(i, j) = rng.complex_gaussian();
    }
  }
  return m;
}

ComplexMatrix conjugate(const ComplexMatrix& v, const ComplexMatrix& m) {
  return v * m * dagger(v);
}

// d x d matrix with `block` placed on the diagonal starting at `offset`.
ComplexMatrix embed(const ComplexMatrix& block, std::size_t d, std::size_t offset) {
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < block.rows(); ++i) {
    for (std::size_t j = 0; j < block.cols(); ++j) {
      out(offset + i, offset + j) = block(i, j);
    }
  }
  return out;
}

struct Extrema {
  double min_overlap = std::numeric_limits<double>::infinity();
  double max_overlap = -std::numeric_limits<double>::infinity();
  bool seen = false;

  void observe(double o1, double o2) {
    min_overlap = std::min({min_overlap, o1, o2});
    max_overlap = std::max({max_overlap, o1, o2});
    seen = true;
  }

  void finalize(Report& report) const {
    report.min_overlap = seen ? min_overlap : 0.0;
    report.max_overlap = seen ? max_overlap : 0.0;
  }
};

} // namespace

void ExperimentConfig::validate() const {
  if (d_s < 2) {
    throw ParameterError("config: d_s must be at least 2, got " + std::to_string(d_s));
  }
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ParameterError("config: epsilon must lie in (0, 1/2), got " + std::to_string(epsilon));
  }
  if (samples < 1) {
    throw ParameterError("config: samples must be at least 1");
  }
  if (ready_rank < 1) {
    throw ParameterError("config: ready_rank must be at least 1");
  }
  if (d_e < 2 * ready_rank) {
    throw ParameterError("config: d_e = " + std::to_string(d_e) +
                         " is below 2*ready_rank = " + std::to_string(2 * ready_rank));
  }
  if (delta.has_value() && !(*delta > 0.0)) {
    throw ParameterError("config: delta must be positive, got " + std::to_string(*delta));
  }
}

double ExperimentConfig::resolved_delta() const {
  return delta.has_value() ? *delta : neighborhood_bound(epsilon);
}

double neighborhood_bound(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ParameterError("neighborhood_bound: epsilon must lie in (0, 1/2), got " +
                         std::to_string(epsilon));
  }
  return std::min(0.5 - epsilon, epsilon / 2.0) * 0.9;
}

MeasurementModel experiment_model(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t ms = derive_seed(config.seed, kStreamModel);
  const StateVector psi1 = random_pure(config.d_s, derive_seed(ms, 0));
  const StateVector psi2 = orthonormal_partner(psi1, derive_seed(ms, 1));
  const DensityOperator ready = random_mixed(config.d_e, config.ready_rank, derive_seed(ms, 2));
  const StateVector pointer1 = random_pure(config.d_e, derive_seed(ms, 3));
  const StateVector pointer2 = orthonormal_partner(pointer1, derive_seed(ms, 4));
  return build_model(config.d_s, config.d_e, psi1, psi2, ready, pointer1, pointer2);
}

Report run_pure_qmp(const ExperimentConfig& config) {
  const auto start = Clock::now();
  config.validate();
  if (config.ready_rank != 1) {
    throw ParameterError("run_pure_qmp: ready_rank must be 1, got " +
                         std::to_string(config.ready_rank));
  }

  Report report;
  report.name = "qmp-pure";
  report.config = config;

  const MeasurementModel model = experiment_model(config);
  const double delta = config.resolved_delta();

  // Rank-1 ready state: its top eigenvector is the vector e.
  const StateVector e = StateVector::normalized(column(model.ready.spectrum().eigenvectors, 0));
  const StateVector phi = balanced_superposition(model.psi1, model.psi2);

  const std::vector<Complex> a1 = act(model.u, kron_vec(model.psi1.amplitudes(), e.amplitudes()));
  const std::vector<Complex> a2 = act(model.u, kron_vec(model.psi2.amplitudes(), e.amplitudes()));
  const std::vector<Complex> c = act(model.u, kron_vec(phi.amplitudes(), e.amplitudes()));
  const StateVector anchor1 = StateVector::normalized(a1);
  const StateVector anchor2 = StateVector::normalized(a2);
  const StateVector center = StateVector::normalized(c);

  // Half-overlap identity at the balanced superposition, vector route.
  const double c1 = std::norm(inner(center, anchor1));
  const double c2 = std::norm(inner(center, anchor2));
  report.center_overlap1 = c1;
  report.center_overlap2 = c2;
  report.max_deviation = std::max(std::abs(c1 - 0.5), std::abs(c2 - 0.5));
  bool checks_ok = report.max_deviation <= kConstructTol;

  const std::uint64_t sweep_seed = derive_seed(config.seed, kStreamSweep);
  Extrema extrema;
  report.sweep.reserve(config.samples);
  for (std::size_t k = 0; k < config.samples; ++k) {
    const std::uint64_t sk = derive_seed(sweep_seed, k);
    Rng rng(sk);

    // Point on the spherical cap: chord u*delta from phi along a random
    // perpendicular direction, so the Euclidean distance never exceeds delta.
    const double chord = rng.uniform() * delta;
    const double theta = 2.0 * std::asin(std::min(chord, 2.0) / 2.0);
    const StateVector perp = orthonormal_partner(phi, derive_seed(sk, 1));
    std::vector<Complex> amps(phi.dim());
    for (std::size_t i = 0; i < phi.dim(); ++i) {
      amps[i] = std::cos(theta) * phi[i] + std::sin(theta) * perp[i];
    }
    const StateVector psi = StateVector::normalized(std::move(amps));

    const StateVector evolved =
        StateVector::normalized(act(model.u, kron_vec(psi.amplitudes(), e.amplitudes())));
    const Classification cls = classify_pure(evolved, anchor1, anchor2, config.epsilon);

    SweepRecord rec;
    rec.sample_index = k;
    // HS distance of the sampled projector from the center projector.
    const double state_overlap = std::min(std::norm(inner(psi, phi)), 1.0);
    rec.delta_actual = std::sqrt(std::max(0.0, 2.0 * (1.0 - state_overlap)));
    rec.overlap1 = cls.overlap1;
    rec.overlap2 = cls.overlap2;
    rec.label = cls.label;
    extrema.observe(rec.overlap1, rec.overlap2);

    const bool outside = cls.label == Label::Indefinite;
    const bool mechanism = std::min(cls.overlap1, cls.overlap2) > config.epsilon;
    if (!outside || !mechanism) {
      report.violating_samples.push_back(k);
    }
    switch (cls.label) {
      case Label::Config1:
        ++report.counters.config1;
        break;
      case Label::Config2:
        ++report.counters.config2;
        break;
      case Label::Indefinite:
        ++report.counters.indefinite;
        break;
    }
    report.sweep.push_back(rec);
  }

  report.counters.total = config.samples;
  report.counters.violations = report.violating_samples.size();
  extrema.finalize(report);
  report.pass = checks_ok && report.counters.violations == 0;
  report.duration_ms = elapsed_ms(start);
  return report;
}

Report run_impure_qmp(const ExperimentConfig& config) {
  const auto start = Clock::now();
  config.validate();

  Report report;
  report.name = "qmp-impure";
  report.config = config;

  const MeasurementModel model = experiment_model(config);
  const ConfigurationRegions regions = make_regions(model, config.epsilon);
  const double delta = config.resolved_delta();

  const StateVector phi = balanced_superposition(model.psi1, model.psi2);
  const DensityOperator phi_proj = pure_projector(phi);
  const DensityOperator center = evolve(
      model, make_density(kron(phi_proj.matrix(), model.ready.matrix())));

  // Half-overlap identity through the square-root geometry.
  const double c1 = sqrt_overlap(center, regions.anchor1);
  const double c2 = sqrt_overlap(center, regions.anchor2);
  report.center_overlap1 = c1;
  report.center_overlap2 = c2;
  report.max_deviation = std::max(std::abs(c1 - 0.5), std::abs(c2 - 0.5));
  bool checks_ok = report.max_deviation <= kDerivedTol;
  checks_ok = checks_ok && classify(center, regions).label == Label::Indefinite;

  // The anchors must land in their own regions.
  checks_ok = checks_ok && classify(regions.anchor1, regions).label == Label::Config1;
  checks_ok = checks_ok && classify(regions.anchor2, regions).label == Label::Config2;

  // Premise audit: premeasurement product states sit on the square-root
  // product manifold, sqrt(rho_s (x) E) = sqrt(rho_s) (x) sqrt(E). The left
  // side goes through its own eigendecomposition, so the two routes are
  // independent.
  const std::uint64_t premise_seed = derive_seed(config.seed, kStreamPremise);
  for (std::size_t k = 0; k < kPremiseSamples; ++k) {
    const DensityOperator rho_s =
        random_mixed(config.d_s, config.d_s, derive_seed(premise_seed, k));
    const DensityOperator total =
        make_density(kron(rho_s.matrix(), model.ready.matrix()));
    const double dev =
        hs_norm(sqrt_state(total) - kron(sqrt_state(rho_s), sqrt_state(model.ready)));
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > kDerivedTol) {
      checks_ok = false;
    }
  }

  const std::uint64_t sweep_seed = derive_seed(config.seed, kStreamSweep);
  Extrema extrema;
  report.sweep.reserve(config.samples);
  for (std::size_t k = 0; k < config.samples; ++k) {
    const std::uint64_t sk = derive_seed(sweep_seed, k);
    const DensityOperator rho_s = perturb_density(phi_proj, delta, sk);
    const DensityOperator total = make_density(kron(rho_s.matrix(), model.ready.matrix()));
    const DensityOperator evolved = evolve(model, total);
    const Classification cls = classify(evolved, regions);

    SweepRecord rec;
    rec.sample_index = k;
    rec.delta_actual = hs_norm(rho_s.matrix() - phi_proj.matrix());
    rec.overlap1 = cls.overlap1;
    rec.overlap2 = cls.overlap2;
    rec.label = cls.label;
    extrema.observe(rec.overlap1, rec.overlap2);

    const bool outside = cls.label == Label::Indefinite;
    const bool mechanism = std::min(cls.overlap1, cls.overlap2) > config.epsilon;
    if (!outside || !mechanism) {
      report.violating_samples.push_back(k);
    }
    switch (cls.label) {
      case Label::Config1:
        ++report.counters.config1;
        break;
      case Label::Config2:
        ++report.counters.config2;
        break;
      case Label::Indefinite:
        ++report.counters.indefinite;
        break;
    }
    report.sweep.push_back(rec);
  }

  report.counters.total = config.samples;
  report.counters.violations = report.violating_samples.size();
  extrema.finalize(report);
  report.pass = checks_ok && report.counters.violations == 0;
  report.duration_ms = elapsed_ms(start);
  return report;
}

Report verify_automorphism(const ExperimentConfig& config) {
  const auto start = Clock::now();
  config.validate();

  Report report;
  report.name = "automorphism";
  report.config = config;

  const std::uint64_t pair_seed = derive_seed(config.seed, kStreamPairs);
  for (std::size_t k = 0; k < config.samples; ++k) {
    const std::uint64_t sk = derive_seed(pair_seed, k);
    Rng meta(sk);
    const std::size_t d = 2 + static_cast<std::size_t>(meta.uniform() * 11.0);
    const std::size_t rank = 1 + static_cast<std::size_t>(meta.uniform() * static_cast<double>(d));

    const DensityOperator rho = random_mixed(d, rank, derive_seed(sk, 1));
    const ComplexMatrix u = random_unitary(d, derive_seed(sk, 2));
    Rng pair_rng(derive_seed(sk, 3));
    const ComplexMatrix a = gaussian_matrix(d, pair_rng);
    const ComplexMatrix b = gaussian_matrix(d, pair_rng);

    const ComplexMatrix ua = conjugate(u, a);
    const ComplexMatrix ub = conjugate(u, b);
    const double dev_product = hs_norm(conjugate(u, a * b) - ua * ub);
    const double dev_inner = std::abs(hs_inner(ua, ub) - hs_inner(a, b));
    const double dev_sqrt =
        hs_norm(sqrt_psd(conjugate(u, rho.matrix())) - conjugate(u, sqrt_state(rho)));

    const double dev = std::max({dev_product, dev_inner, dev_sqrt});
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > kDerivedTol) {
      report.violating_samples.push_back(k);
    }
  }

  report.counters.total = config.samples;
  report.counters.violations = report.violating_samples.size();
  report.pass = report.counters.violations == 0;
  report.duration_ms = elapsed_ms(start);
  return report;
}

Report verify_orthogonality(const ExperimentConfig& config) {
  const auto start = Clock::now();
  config.validate();

  Report report;
  report.name = "orthogonality";
  report.config = config;
  Extrema extrema;

  // Sharp instances: complementary projections on a rotated block split.
  const std::uint64_t sharp_seed = derive_seed(config.seed, kStreamSharp);
  for (std::size_t k = 0; k < config.samples; ++k) {
    const std::uint64_t sk = derive_seed(sharp_seed, k);
    Rng meta(sk);
    const std::size_t d1 = 1 + static_cast<std::size_t>(meta.uniform() * 3.0);
    const std::size_t d2 = 1 + static_cast<std::size_t>(meta.uniform() * 3.0);
    const std::size_t d = d1 + d2;
    const std::size_t r1 = 1 + static_cast<std::size_t>(meta.uniform() * static_cast<double>(d1));
    const std::size_t r2 = 1 + static_cast<std::size_t>(meta.uniform() * static_cast<double>(d2));

    const ComplexMatrix v = random_unitary(d, derive_seed(sk, 1));
    std::vector<double> diag1(d, 0.0), diag2(d, 0.0);
    for (std::size_t i = 0; i < d1; ++i) {
      diag1[i] = 1.0;
    }
    for (std::size_t i = d1; i < d; ++i) {
      diag2[i] = 1.0;
    }
    const ComplexMatrix p1 = conjugate(v, ComplexMatrix::diagonal(diag1));
    const ComplexMatrix p2 = conjugate(v, ComplexMatrix::diagonal(diag2));
    const DensityOperator rho1 = make_density(
        conjugate(v, embed(random_mixed(d1, r1, derive_seed(sk, 2)).matrix(), d, 0)));
    const DensityOperator rho2 = make_density(
        conjugate(v, embed(random_mixed(d2, r2, derive_seed(sk, 3)).matrix(), d, d1)));

    const double overlap = sharp_projection_check(p1, p2, rho1, rho2);
    extrema.observe(overlap, overlap);
    report.max_deviation = std::max(report.max_deviation, overlap);
    if (overlap > kDerivedTol) {
      report.violating_samples.push_back(k);
    }
  }

  // Unsharp instances: an effect with a genuinely fractional middle block;
  // the states live on its eigenvalue-1 and eigenvalue-0 eigenspaces.
  const std::uint64_t unsharp_seed = derive_seed(config.seed, kStreamUnsharp);
  for (std::size_t k = 0; k < config.samples; ++k) {
    const std::uint64_t sk = derive_seed(unsharp_seed, k);
    Rng meta(sk);
    const std::size_t d1 = 1 + static_cast<std::size_t>(meta.uniform() * 2.0);
    const std::size_t mid = 1 + static_cast<std::size_t>(meta.uniform() * 2.0);
    const std::size_t d2 = 1 + static_cast<std::size_t>(meta.uniform() * 2.0);
    const std::size_t d = d1 + mid + d2;
    const std::size_t r1 = 1 + static_cast<std::size_t>(meta.uniform() * static_cast<double>(d1));
    const std::size_t r2 = 1 + static_cast<std::size_t>(meta.uniform() * static_cast<double>(d2));

    const ComplexMatrix v = random_unitary(d, derive_seed(sk, 1));
    std::vector<double> diag(d, 0.0);
    for (std::size_t i = 0; i < d1; ++i) {
      diag[i] = 1.0;
    }
    for (std::size_t i = d1; i < d1 + mid; ++i) {
      diag[i] = 0.1 + 0.8 * meta.uniform();
    }
    const ComplexMatrix e1 = conjugate(v, ComplexMatrix::diagonal(diag));
    const DensityOperator rho1 = make_density(
        conjugate(v, embed(random_mixed(d1, r1, derive_seed(sk, 2)).matrix(), d, 0)));
    const DensityOperator rho2 = make_density(
        conjugate(v, embed(random_mixed(d2, r2, derive_seed(sk, 3)).matrix(), d, d1 + mid)));

    const double overlap = effect_pair_check(e1, rho1, rho2);
    const double eigdev = effect_eigenvector_deviation(e1, rho1, rho2);

    // Cross eigenvectors of the two states must be orthogonal.
    double cross = 0.0;
    const auto& spec1 = rho1.spectrum();
    const auto& spec2 = rho2.spectrum();
    for (std::size_t i = 0; i < d; ++i) {
      if (spec1.eigenvalues[i] <= kRankTol) {
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) {
        if (spec2.eigenvalues[j] <= kRankTol) {
          continue;
        }
        cross = std::max(cross, std::abs(dot(column(spec1.eigenvectors, i),
                                             column(spec2.eigenvectors, j))));
      }
    }

    extrema.observe(overlap, overlap);
    const double dev = std::max({overlap, eigdev, cross});
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > kDerivedTol) {
      report.violating_samples.push_back(config.samples + k);
    }
  }

  report.counters.total = 2 * config.samples;
  report.counters.violations = report.violating_samples.size();
  extrema.finalize(report);
  report.pass = report.counters.violations == 0;
  report.duration_ms = elapsed_ms(start);
  return report;
}

std::string report_to_json(const Report& report) {
  std::string s;
  s += "{\n";
  s += "  \"name\": \"" + report.name + "\",\n";
  s += "  \"config\": {\n";
  s += "    \"ds\": " + std::to_string(report.config.d_s) + ",\n";
  s += "    \"de\": " + std::to_string(report.config.d_e) + ",\n";
  s += "    \"epsilon\": " + format_double(report.config.epsilon) + ",\n";
  s += "    \"ready_rank\": " + std::to_string(report.config.ready_rank) + ",\n";
  s += "    \"samples\": " + std::to_string(report.config.samples) + ",\n";
  s += "    \"seed\": " + std::to_string(report.config.seed) + ",\n";
  s += "    \"delta\": " + format_double(report.config.resolved_delta()) + ",\n";
  s += std::string("    \"delta_mode\": ") +
       (report.config.delta.has_value() ? "\"explicit\"" : "\"auto\"") + "\n";
  s += "  },\n";
  s += std::string("  \"verdict\": ") + (report.pass ? "\"pass\"" : "\"fail\"") + ",\n";
  s += "  \"counters\": {\n";
  s += "    \"total\": " + std::to_string(report.counters.total) + ",\n";
  s += "    \"config1\": " + std::to_string(report.counters.config1) + ",\n";
  s += "    \"config2\": " + std::to_string(report.counters.config2) + ",\n";
  s += "    \"indefinite\": " + std::to_string(report.counters.indefinite) + ",\n";
  s += "    \"violations\": " + std::to_string(report.counters.violations) + "\n";
  s += "  },\n";
  s += "  \"extrema\": {\n";
  s += "    \"min_overlap\": " + format_double(report.min_overlap) + ",\n";
  s += "    \"max_overlap\": " + format_double(report.max_overlap) + ",\n";
  s += "    \"max_deviation\": " + format_double(report.max_deviation) + "\n";
  s += "  },\n";
  if (report.center_overlap1.has_value() && report.center_overlap2.has_value()) {
    s += "  \"center_overlap1\": " + format_double(*report.center_overlap1) + ",\n";
    s += "  \"center_overlap2\": " + format_double(*report.center_overlap2) + ",\n";
  }
  s += "  \"violating_samples\": [";
  for (std::size_t i = 0; i < report.violating_samples.size(); ++i) {
    if (i > 0) {
      s += ",";
    }
    s += std::to_string(report.violating_samples[i]);
  }
  s += "],\n";
  s += "  \"duration_ms\": " + format_double(report.duration_ms) + "\n";
  s += "}\n";
  return s;
}

std::string sweep_to_csv(const Report& report) {
  std::string s = "sample_index,delta_actual,overlap1,overlap2,label\n";
  for (const SweepRecord& rec : report.sweep) {
    s += std::to_string(rec.sample_index);
    s += ',';
    s += format_double(rec.delta_actual);
    s += ',';
    s += format_double(rec.overlap1);
    s += ',';
    s += format_double(rec.overlap2);
    s += ',';
    s += to_string(rec.label);
    s += '\n';
  }
  return s;
}

} // namespace qmplab
