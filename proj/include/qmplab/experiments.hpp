#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmplab/measurement.hpp"

namespace qmplab {

struct ExperimentConfig {
  std::size_t d_s = 2;
  std::size_t d_e = 4;
  double epsilon = 0.1;
  std::size_t ready_rank = 1;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  // Neighborhood radius for the sweeps; empty means neighborhood_bound(epsilon).
  std::optional<double> delta;

  void validate() const;
  double resolved_delta() const;
};

struct SweepRecord {
  std::size_t sample_index = 0;
  double delta_actual = 0.0;
  double overlap1 = 0.0;
  double overlap2 = 0.0;
  Label label = Label::Indefinite;
};

struct Counters {
  std::size_t total = 0;
  std::size_t config1 = 0;
  std::size_t config2 = 0;
  std::size_t indefinite = 0;
  std::size_t violations = 0;
};

// Outcome of one experiment run. The verdict is a pure function of
// (config, seed); duration_ms is the only field that varies between
// repeated runs.
struct Report {
  std::string name;
  ExperimentConfig config;
  bool pass = false;
  Counters counters;
  double min_overlap = 0.0;
  double max_overlap = 0.0;
  // Worst observed residual of whichever identities the experiment checks.
  double max_deviation = 0.0;
  // The two half-overlap values at the balanced superposition, present for
  // the qmp experiments only.
  std::optional<double> center_overlap1;
  std::optional<double> center_overlap2;
  std::vector<std::size_t> violating_samples;
  std::vector<SweepRecord> sweep;
  double duration_ms = 0.0;
};

// Radius such that any state within it of the balanced-superposition state
// keeps both anchor overlaps strictly above epsilon. Uses the linear
// perturbation bound |overlap - 0.5| <= delta with a 0.9 safety factor:
// delta = min(0.5 - epsilon, epsilon/2) * 0.9.
double neighborhood_bound(double epsilon);

// The seeded model a given config produces; shared by both qmp experiments
// so matched seeds land on identical models.
MeasurementModel experiment_model(const ExperimentConfig& config);

// Pure-state sweep: checks the half-overlap identity at the balanced
// superposition, then samples unit vectors within resolved_delta of it and
// requires every evolved sample to stay outside both regions under the
// vector-form test. Requires ready_rank = 1.
Report run_pure_qmp(const ExperimentConfig& config);

// Density-operator sweep: same structure through the square-root geometry,
// any ready rank. Additionally audits the square-root factorization of
// product states on 100 sampled system states and checks that the two
// anchors classify into their own regions.
Report run_impure_qmp(const ExperimentConfig& config);

// Conjugation identities per sample: u(ab) = u(a)u(b), HS-inner invariance,
// and sqrt(u(rho)) = u(sqrt(rho)), at per-sample dimensions 2..12.
Report verify_automorphism(const ExperimentConfig& config);

// Constructed sharp and unsharp instances; requires zero square-root overlap,
// the eigenvalue-1 eigenvector property of certain outcomes, and
// orthogonality of cross eigenvectors.
Report verify_orthogonality(const ExperimentConfig& config);

// Deterministic serialization: fixed key order, 17 significant digits,
// duration_ms on its own (final) line so callers can compare report bodies
// modulo timing.
std::string report_to_json(const Report& report);

// Header sample_index,delta_actual,overlap1,overlap2,label; rows ascending.
std::string sweep_to_csv(const Report& report);

} // namespace qmplab
