#pragma once

#include <cstddef>
#include <string>

#include "qmplab/complex_matrix.hpp"
#include "qmplab/density_operator.hpp"
#include "qmplab/state_vector.hpp"
#include "qmplab/tolerances.hpp"

namespace qmplab {

// A two-outcome premeasurement setup on C^{d_s} (x) C^{d_e}: two orthogonal
// microsystem states, an apparatus ready state, two orthogonal pointer
// states, and the interaction unitary. Build through build_model or
// load_model; verify_model re-checks every invariant, which is what loaders
// rely on.
struct MeasurementModel {
  std::size_t d_s = 0;
  std::size_t d_e = 0;
  StateVector psi1;
  StateVector psi2;
  DensityOperator ready;
  StateVector pointer1;
  StateVector pointer2;
  ComplexMatrix u;

  std::size_t total_dim() const { return d_s * d_e; }
};

// Number of ready-state eigenvalues above kRankTol.
std::size_t ready_rank(const DensityOperator& ready);

// Constructs the interaction unitary so that for each eigenvector f_a of the
// ready state's support, U(psi_i (x) f_a) = psi_i (x) g_{i,a}, where the two
// orthonormal families {g_{i,a}} start at the pointers (g_{i,1} = pointer_i)
// and occupy mutually orthogonal environment subspaces. Requires
// d_e >= 2*rank(ready) so both shifted supports fit. The remaining action of
// U is a fixed deterministic completion.
MeasurementModel build_model(std::size_t d_s, std::size_t d_e, const StateVector& psi1,
                             const StateVector& psi2, const DensityOperator& ready,
                             const StateVector& pointer1, const StateVector& pointer2);

// Full invariant re-check: orthogonality gates, unitarity of U, and the
// product-form action on the ready support with the pointer leading each
// shifted family.
void verify_model(const MeasurementModel& model);

// U rho U^dagger, revalidated.
DensityOperator evolve(const MeasurementModel& model, const DensityOperator& rho);

// |<sqrt(rho1), sqrt(rho2)>_HS|, clamped into [0, 1]. Equals |<x,y>|^2 on
// pure projectors.
double sqrt_overlap(const DensityOperator& rho1, const DensityOperator& rho2);

// Apparatus configuration regions: open HS-balls of radius epsilon/2 on
// square roots, centered at the evolved premeasurement states
// u(P_{psi_i} (x) ready). Orthogonal anchors plus the triangle inequality
// give |<sqrt(rho1), sqrt(rho2)>_HS| < epsilon for any members of the two
// balls.
struct ConfigurationRegions {
  double epsilon = 0.0;
  DensityOperator anchor1;
  DensityOperator anchor2;
  double radius = 0.0;
};

ConfigurationRegions make_regions(const MeasurementModel& model, double epsilon);

enum class Label { Config1, Config2, Indefinite };

std::string to_string(Label label);

struct Classification {
  Label label = Label::Indefinite;
  double overlap1 = 0.0;
  double overlap2 = 0.0;
  double distance1 = 0.0;
  double distance2 = 0.0;
};

// Ball membership test against both anchors. At most one ball can contain
// rho since the anchors are orthogonal and the radius is below sqrt(2)/2.
Classification classify(const DensityOperator& rho, const ConfigurationRegions& regions);

// Vector form of the same test for pure states. Projector square roots are
// the projectors themselves and ||P_x - P_a||_HS^2 = 2(1 - |<x,a>|^2), so
// the ball test against pure anchors a1, a2 reduces to a threshold on the
// squared inner product. Overlap fields carry |<x,a_i>|^2.
Classification classify_pure(const StateVector& x, const StateVector& a1, const StateVector& a2,
                             double epsilon);

// Sharp-observable scenario: orthogonal projections p1 p2 = 0 with
// Tr(rho_i p_i) = 1. Returns sqrt_overlap(rho1, rho2), which the hypotheses
// force to zero.
double sharp_projection_check(const ComplexMatrix& p1, const ComplexMatrix& p2,
                              const DensityOperator& rho1, const DensityOperator& rho2);

// Unsharp-observable scenario: effect 0 <= e1 <= id with Tr(e1 rho1) = 1 and
// Tr((id - e1) rho2) = 1. Verifies that every nonzero-eigenvalue eigenvector
// of rho_i is an eigenvalue-1 eigenvector of its effect, then returns
// sqrt_overlap(rho1, rho2), again forced to zero.
double effect_pair_check(const ComplexMatrix& e1, const DensityOperator& rho1,
                         const DensityOperator& rho2);

// Largest residual ||e_i x - x|| over the nonzero-eigenvalue eigenvectors x
// of rho_i (e_2 = id - e1). Exposed separately so reports can quote the
// observed deviation, not just pass/fail.
double effect_eigenvector_deviation(const ComplexMatrix& e1, const DensityOperator& rho1,
                                    const DensityOperator& rho2);

// JSON persistence; loading re-runs verify_model.
std::string model_to_json(const MeasurementModel& model);
MeasurementModel model_from_json_text(const std::string& text);
void save_model(const MeasurementModel& model, const std::string& path);
MeasurementModel load_model(const std::string& path);

} // namespace qmplab
