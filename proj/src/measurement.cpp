#include "qmplab/measurement.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qmplab/errors.hpp"
#include "qmplab/linalg.hpp"
#include "qmplab/matrix_json.hpp"

namespace qmplab {

namespace {

// Column k of a matrix as a plain vector.
std::vector<Complex> column(const ComplexMatrix& m, std::size_t k) {
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out[i] = m(i, k);
  }
  return out;
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

double vec_norm(const std::vector<Complex>& a) {
  double out = 0.0;
  for (const Complex& c : a) {
    out += std::norm(c);
  }
  return std::sqrt(out);
}

// Eigenvectors of the ready state with eigenvalue above kRankTol, in the
// cached descending-eigenvalue order.
std::vector<std::vector<Complex>> support_basis(const DensityOperator& ready) {
  std::vector<std::vector<Complex>> out;
  const auto& spec = ready.spectrum();
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] > kRankTol) {
      out.push_back(column(spec.eigenvectors, k));
    }
  }
  return out;
}

void check_model_dims(const MeasurementModel& model) {
  if (model.d_s < 2) {
    throw DimensionError("model: d_s must be at least 2");
  }
  if (model.psi1.dim() != model.d_s || model.psi2.dim() != model.d_s) {
    throw DimensionError("model: psi dimensions do not match d_s");
  }
  if (model.ready.dim() != model.d_e) {
    throw DimensionError("model: ready-state dimension does not match d_e");
  }
  if (model.pointer1.dim() != model.d_e || model.pointer2.dim() != model.d_e) {
    throw DimensionError("model: pointer dimensions do not match d_e");
  }
  if (model.u.rows() != model.total_dim() || model.u.cols() != model.total_dim()) {
    throw DimensionError("model: U must be square of dimension d_s*d_e");
  }
}

std::string vector_to_json(const std::vector<Complex>& v) {
  return matrix_to_json(ComplexMatrix(v.size(), 1, v));
}

std::vector<Complex> vector_from_json(const nlohmann::json& j) {
  const ComplexMatrix m = matrix_from_json(j);
  if (m.cols() != 1) {
    throw ValidationError("vector_from_json: expected a single-column matrix");
  }
  return std::vector<Complex>(m.data().begin(), m.data().end());
}

} // namespace

std::size_t ready_rank(const DensityOperator& ready) {
  std::size_t r = 0;
  for (double lambda : ready.spectrum().eigenvalues) {
    if (lambda > kRankTol) {
      ++r;
    }
  }
  return r;
}

MeasurementModel build_model(std::size_t d_s, std::size_t d_e, const StateVector& psi1,
                             const StateVector& psi2, const DensityOperator& ready,
                             const StateVector& pointer1, const StateVector& pointer2) {
  if (d_s < 2) {
    throw DimensionError("build_model: d_s must be at least 2");
  }
  if (psi1.dim() != d_s || psi2.dim() != d_s) {
    throw DimensionError("build_model: psi dimensions do not match d_s");
  }
  if (ready.dim() != d_e || pointer1.dim() != d_e || pointer2.dim() != d_e) {
    throw DimensionError("build_model: environment operands do not match d_e");
  }
  const double psi_ortho = std::abs(inner(psi1, psi2));
  if (psi_ortho > kInputTol) {
    throw ValidationError("build_model: orthogonality check failed for psi1, psi2: |<psi1,psi2>| = " +
                          std::to_string(psi_ortho));
  }
  const double ptr_ortho = std::abs(inner(pointer1, pointer2));
  if (ptr_ortho > kInputTol) {
    throw ValidationError(
        "build_model: orthogonality check failed for pointer1, pointer2: |<p1,p2>| = " +
        std::to_string(ptr_ortho));
  }
  const std::size_t r = ready_rank(ready);
  if (d_e < 2 * r) {
    throw DimensionError("build_model: d_e = " + std::to_string(d_e) +
                         " cannot host two orthogonal shifted supports (rank " +
                         std::to_string(r) + " needs " + std::to_string(2 * r) + ")");
  }

  const std::vector<std::vector<Complex>> f = support_basis(ready);

  // Environment frame led by the pointers; columns 2..2r-1 supply the rest
  // of the two shifted families.
  const std::vector<std::vector<Complex>> pointer_cols = {pointer1.amplitudes(),
                                                          pointer2.amplitudes()};
  const ComplexMatrix frame = complete_unitary(d_e, pointer_cols);
  std::vector<std::vector<Complex>> g1(r), g2(r);
  g1[0] = column(frame, 0);
  g2[0] = column(frame, 1);
  for (std::size_t a = 1; a < r; ++a) {
    g1[a] = column(frame, 1 + a);
    g2[a] = column(frame, r + a);
  }

  // U = W_out W_in^dagger sends psi_i (x) f_a to psi_i (x) g_{i,a}; the
  // completions fix its action on the rest of the space deterministically.
  std::vector<std::vector<Complex>> in_cols, out_cols;
  in_cols.reserve(2 * r);
  out_cols.reserve(2 * r);
  for (const StateVector* psi : {&psi1, &psi2}) {
    const auto& g = (psi == &psi1) ? g1 : g2;
    for (std::size_t a = 0; a < r; ++a) {
      in_cols.push_back(kron_vec(psi->amplitudes(), f[a]));
      out_cols.push_back(kron_vec(psi->amplitudes(), g[a]));
    }
  }
  const std::size_t n = d_s * d_e;
  const ComplexMatrix w_in = complete_unitary(n, in_cols);
  const ComplexMatrix w_out = complete_unitary(n, out_cols);
  ComplexMatrix u = w_out * dagger(w_in);

  MeasurementModel model{d_s, d_e, psi1, psi2, ready, pointer1, pointer2, std::move(u)};
  verify_model(model);
  return model;
}

void verify_model(const MeasurementModel& model) {
  check_model_dims(model);

  const double psi_ortho = std::abs(inner(model.psi1, model.psi2));
  if (psi_ortho > kInputTol) {
    throw ValidationError("verify_model: orthogonality check failed for psi1, psi2: " +
                          std::to_string(psi_ortho));
  }
  const double ptr_ortho = std::abs(inner(model.pointer1, model.pointer2));
  if (ptr_ortho > kInputTol) {
    throw ValidationError("verify_model: orthogonality check failed for pointers: " +
                          std::to_string(ptr_ortho));
  }

  const std::size_t n = model.total_dim();
  const double unitarity = hs_norm(dagger(model.u) * model.u - ComplexMatrix::identity(n));
  if (unitarity > kConstructTol) {
    throw ValidationError("verify_model: unitarity check failed, ||U^dagger U - id|| = " +
                          std::to_string(unitarity));
  }

  const std::size_t r = ready_rank(model.ready);
  if (model.d_e < 2 * r) {
    throw DimensionError("verify_model: d_e cannot host two orthogonal shifted supports");
  }
  const std::vector<std::vector<Complex>> f = support_basis(model.ready);

  // Action on the ready support must factor as psi_i (x) h_{i,a} with the
  // pointer leading each family and the two families jointly orthonormal.
  std::vector<std::vector<Complex>> h1, h2;
  for (int i = 0; i < 2; ++i) {
    const StateVector& psi = (i == 0) ? model.psi1 : model.psi2;
    const StateVector& pointer = (i == 0) ? model.pointer1 : model.pointer2;
    auto& h = (i == 0) ? h1 : h2;
    for (std::size_t a = 0; a < r; ++a) {
      const std::vector<Complex> w = act(model.u, kron_vec(psi.amplitudes(), f[a]));
      std::vector<Complex> env(model.d_e, Complex(0.0, 0.0));
      for (std::size_t j = 0; j < model.d_s; ++j) {
        const Complex cj = std::conj(psi[j]);
        for (std::size_t k = 0; k < model.d_e; ++k) {
          env[k] += cj * w[j * model.d_e + k];
        }
      }
      std::vector<Complex> residual = w;
      const std::vector<Complex> product = kron_vec(psi.amplitudes(), env);
      for (std::size_t idx = 0; idx < n; ++idx) {
        residual[idx] -= product[idx];
      }
      const double defect = vec_norm(residual);
      if (defect > kConstructTol) {
        throw ValidationError("verify_model: product-form check failed on the ready support, "
                              "residual = " + std::to_string(defect));
      }
      h.push_back(std::move(env));
    }
    if (!h.empty()) {
      std::vector<Complex> lead = h.front();
      for (std::size_t k = 0; k < model.d_e; ++k) {
        lead[k] -= pointer[k];
      }
      const double lead_defect = vec_norm(lead);
      if (lead_defect > kConstructTol) {
        throw ValidationError("verify_model: shifted family " + std::to_string(i + 1) +
                              " does not start at its pointer, defect = " +
                              std::to_string(lead_defect));
      }
    }
  }
  for (std::size_t a = 0; a < h1.size(); ++a) {
    for (std::size_t b = 0; b < h1.size(); ++b) {
      const double want = (a == b) ? 1.0 : 0.0;
      if (std::abs(dot(h1[a], h1[b]) - Complex(want, 0.0)) > kConstructTol ||
          std::abs(dot(h2[a], h2[b]) - Complex(want, 0.0)) > kConstructTol) {
        throw ValidationError("verify_model: shifted families are not orthonormal");
      }
      if (std::abs(dot(h1[a], h2[b])) > kConstructTol) {
        throw ValidationError("verify_model: shifted families are not mutually orthogonal");
      }
    }
  }
}

DensityOperator evolve(const MeasurementModel& model, const DensityOperator& rho) {
  if (rho.dim() != model.total_dim()) {
    throw DimensionError("evolve: state dimension " + std::to_string(rho.dim()) +
                         " does not match model dimension " + std::to_string(model.total_dim()));
  }
  return make_density(model.u * rho.matrix() * dagger(model.u));
}

double sqrt_overlap(const DensityOperator& rho1, const DensityOperator& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw DimensionError("sqrt_overlap: dimension mismatch " + std::to_string(rho1.dim()) +
                         " vs " + std::to_string(rho2.dim()));
  }
  const double value = std::abs(hs_inner(sqrt_state(rho1), sqrt_state(rho2)));
  return std::min(value, 1.0);
}

ConfigurationRegions make_regions(const MeasurementModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ParameterError("make_regions: epsilon must lie in (0, 1/2), got " +
                         std::to_string(epsilon));
  }
  DensityOperator anchor1 = evolve(
      model, make_density(kron(pure_projector(model.psi1).matrix(), model.ready.matrix())));
  DensityOperator anchor2 = evolve(
      model, make_density(kron(pure_projector(model.psi2).matrix(), model.ready.matrix())));
  const double cross = sqrt_overlap(anchor1, anchor2);
  if (cross > kConstructTol) {
    throw ValidationError("make_regions: anchor orthogonality check failed, overlap = " +
                          std::to_string(cross));
  }
  return ConfigurationRegions{epsilon, std::move(anchor1), std::move(anchor2), epsilon / 2.0};
}

std::string to_string(Label label) {
  switch (label) {
    case Label::Config1:
      return "Config1";
    case Label::Config2:
      return "Config2";
    case Label::Indefinite:
      return "Indefinite";
  }
  throw ParameterError("to_string: unknown label");
}

Classification classify(const DensityOperator& rho, const ConfigurationRegions& regions) {
  if (rho.dim() != regions.anchor1.dim()) {
    throw DimensionError("classify: state dimension " + std::to_string(rho.dim()) +
                         " does not match region dimension " +
                         std::to_string(regions.anchor1.dim()));
  }
  Classification out;
  out.distance1 = hs_norm(sqrt_state(rho) - sqrt_state(regions.anchor1));
  out.distance2 = hs_norm(sqrt_state(rho) - sqrt_state(regions.anchor2));
  out.overlap1 = sqrt_overlap(rho, regions.anchor1);
  out.overlap2 = sqrt_overlap(rho, regions.anchor2);
  const bool in1 = out.distance1 < regions.radius;
  const bool in2 = out.distance2 < regions.radius;
  if (in1 && in2) {
    // Unreachable for orthogonal anchors and radius < sqrt(2)/2; kept as a
    // hard stop in case a caller hands in corrupted regions.
    throw NumericalError("classify: state inside both regions");
  }
  out.label = in1 ? Label::Config1 : (in2 ? Label::Config2 : Label::Indefinite);
  return out;
}

Classification classify_pure(const StateVector& x, const StateVector& a1, const StateVector& a2,
                             double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ParameterError("classify_pure: epsilon must lie in (0, 1/2), got " +
                         std::to_string(epsilon));
  }
  if (x.dim() != a1.dim() || a1.dim() != a2.dim()) {
    throw DimensionError("classify_pure: operand dimensions do not agree");
  }
  const double anchor_cross = std::abs(inner(a1, a2));
  if (anchor_cross > kConstructTol) {
    throw ValidationError("classify_pure: anchor orthogonality check failed, |<a1,a2>| = " +
                          std::to_string(anchor_cross));
  }
  Classification out;
  out.overlap1 = std::min(std::norm(inner(x, a1)), 1.0);
  out.overlap2 = std::min(std::norm(inner(x, a2)), 1.0);
  out.distance1 = std::sqrt(std::max(0.0, 2.0 * (1.0 - out.overlap1)));
  out.distance2 = std::sqrt(std::max(0.0, 2.0 * (1.0 - out.overlap2)));
  const double radius = epsilon / 2.0;
  const bool in1 = out.distance1 < radius;
  const bool in2 = out.distance2 < radius;
  if (in1 && in2) {
    throw NumericalError("classify_pure: state inside both regions");
  }
  out.label = in1 ? Label::Config1 : (in2 ? Label::Config2 : Label::Indefinite);
  return out;
}

double sharp_projection_check(const ComplexMatrix& p1, const ComplexMatrix& p2,
                              const DensityOperator& rho1, const DensityOperator& rho2) {
  if (!p1.is_square() || !p2.is_square() || p1.rows() != p2.rows() ||
      p1.rows() != rho1.dim() || rho1.dim() != rho2.dim()) {
    throw DimensionError("sharp_projection_check: operand dimensions do not agree");
  }
  int index = 1;
  for (const ComplexMatrix* p : {&p1, &p2}) {
    const double herm = hs_norm(*p - dagger(*p));
    if (herm > kConstructTol) {
      throw ValidationError("sharp_projection_check: projection " + std::to_string(index) +
                            " is not hermitian, defect = " + std::to_string(herm));
    }
    const double idem = hs_norm((*p) * (*p) - *p);
    if (idem > kConstructTol) {
      throw ValidationError("sharp_projection_check: projection " + std::to_string(index) +
                            " is not idempotent, defect = " + std::to_string(idem));
    }
    ++index;
  }
  const double disjoint = hs_norm(p1 * p2);
  if (disjoint > kConstructTol) {
    throw ValidationError("sharp_projection_check: projections are not disjoint, ||p1 p2|| = " +
                          std::to_string(disjoint));
  }
  const Complex t1 = trace(rho1.matrix() * p1);
  if (std::abs(t1 - Complex(1.0, 0.0)) > kConstructTol) {
    throw ValidationError("sharp_projection_check: Tr(rho1 p1) = " + std::to_string(t1.real()) +
                          ", expected 1");
  }
  const Complex t2 = trace(rho2.matrix() * p2);
  if (std::abs(t2 - Complex(1.0, 0.0)) > kConstructTol) {
    throw ValidationError("sharp_projection_check: Tr(rho2 p2) = " + std::to_string(t2.real()) +
                          ", expected 1");
  }
  return sqrt_overlap(rho1, rho2);
}

double effect_eigenvector_deviation(const ComplexMatrix& e1, const DensityOperator& rho1,
                                    const DensityOperator& rho2) {
  if (!e1.is_square() || e1.rows() != rho1.dim() || rho1.dim() != rho2.dim()) {
    throw DimensionError("effect_eigenvector_deviation: operand dimensions do not agree");
  }
  const std::size_t d = e1.rows();
  const ComplexMatrix e2 = ComplexMatrix::identity(d) - e1;
  double dev = 0.0;
  for (int i = 0; i < 2; ++i) {
    const ComplexMatrix& effect = (i == 0) ? e1 : e2;
    const DensityOperator& rho = (i == 0) ? rho1 : rho2;
    const auto& spec = rho.spectrum();
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
      if (spec.eigenvalues[k] <= kRankTol) {
        continue;
      }
      const std::vector<Complex> x = column(spec.eigenvectors, k);
      std::vector<Complex> residual = act(effect, x);
      for (std::size_t idx = 0; idx < d; ++idx) {
        residual[idx] -= x[idx];
      }
      dev = std::max(dev, vec_norm(residual));
    }
  }
  return dev;
}

double effect_pair_check(const ComplexMatrix& e1, const DensityOperator& rho1,
                         const DensityOperator& rho2) {
  if (!e1.is_square() || e1.rows() != rho1.dim() || rho1.dim() != rho2.dim()) {
    throw DimensionError("effect_pair_check: operand dimensions do not agree");
  }
  const double herm = hs_norm(e1 - dagger(e1));
  if (herm > kConstructTol) {
    throw ValidationError("effect_pair_check: effect is not hermitian, defect = " +
                          std::to_string(herm));
  }
  const SpectralDecomposition spec = herm_eig(e1);
  for (double lambda : spec.eigenvalues) {
    if (lambda < -kConstructTol || lambda > 1.0 + kConstructTol) {
      throw ValidationError("effect_pair_check: effect bounds violated, eigenvalue = " +
                            std::to_string(lambda));
    }
  }
  const std::size_t d = e1.rows();
  const Complex t1 = trace(e1 * rho1.matrix());
  if (std::abs(t1 - Complex(1.0, 0.0)) > kConstructTol) {
    throw ValidationError("effect_pair_check: Tr(e1 rho1) = " + std::to_string(t1.real()) +
                          ", expected 1");
  }
  const Complex t2 = trace((ComplexMatrix::identity(d) - e1) * rho2.matrix());
  if (std::abs(t2 - Complex(1.0, 0.0)) > kConstructTol) {
    throw ValidationError("effect_pair_check: Tr((id - e1) rho2) = " + std::to_string(t2.real()) +
                          ", expected 1");
  }
  const double dev = effect_eigenvector_deviation(e1, rho1, rho2);
  if (dev > kDerivedTol) {
    throw ValidationError("effect_pair_check: eigenvector certainty check failed, deviation = " +
                          std::to_string(dev));
  }
  return sqrt_overlap(rho1, rho2);
}

std::string model_to_json(const MeasurementModel& model) {
  std::string out;
  out += "{\n";
  out += "\"kind\":\"model\",\n";
  out += "\"ds\":" + std::to_string(model.d_s) + ",\n";
  out += "\"de\":" + std::to_string(model.d_e) + ",\n";
  out += "\"psi1\":" + vector_to_json(model.psi1.amplitudes()) + ",\n";
  out += "\"psi2\":" + vector_to_json(model.psi2.amplitudes()) + ",\n";
  out += "\"ready\":" + density_to_json(model.ready) + ",\n";
  out += "\"pointer1\":" + vector_to_json(model.pointer1.amplitudes()) + ",\n";
  out += "\"pointer2\":" + vector_to_json(model.pointer2.amplitudes()) + ",\n";
  out += "\"u\":" + matrix_to_json(model.u) + "\n";
  out += "}\n";
  return out;
}

MeasurementModel model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("model_from_json: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string() ||
      j["kind"].get<std::string>() != "model") {
    throw ValidationError("model_from_json: expected an object with \"kind\":\"model\"");
  }
  for (const char* key : {"ds", "de", "psi1", "psi2", "ready", "pointer1", "pointer2", "u"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("model_from_json: missing field \"") + key + "\"");
    }
  }
  if (!j["ds"].is_number_unsigned() || !j["de"].is_number_unsigned()) {
    throw ValidationError("model_from_json: ds and de must be nonnegative integers");
  }
  const std::size_t d_s = j["ds"].get<std::size_t>();
  const std::size_t d_e = j["de"].get<std::size_t>();

  MeasurementModel model{d_s,
                         d_e,
                         StateVector(vector_from_json(j["psi1"])),
                         StateVector(vector_from_json(j["psi2"])),
                         density_from_json(j["ready"]),
                         StateVector(vector_from_json(j["pointer1"])),
                         StateVector(vector_from_json(j["pointer2"])),
                         matrix_from_json(j["u"])};
  verify_model(model);
  return model;
}

void save_model(const MeasurementModel& model, const std::string& path) {
  write_text_file_atomic(path, model_to_json(model));
}

MeasurementModel load_model(const std::string& path) {
  return model_from_json_text(read_text_file(path));
}

} // namespace qmplab
