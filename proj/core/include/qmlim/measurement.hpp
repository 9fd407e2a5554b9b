// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/linalg.hpp"
#include "qmlim/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmlim {

// A measuring process (K, |ξ⟩, U, M): probe space K of dimension dim_k,
// probe state xi, interaction unitary u on H⊗K, meter observable m on K.
class MeasuringProcess {
 public:
  MeasuringProcess() = default;  // empty (dim 0); make() is the validated path

  // Validates shapes, unitarity of u, Hermiticity of m, normalization of xi.
  static MeasuringProcess make(Eigen::Index dim_h, Eigen::Index dim_k,
                               Vector xi, Matrix u, Matrix m,
                               const Tolerances& tol = {});

  Eigen::Index dim_h() const { return dim_h_; }
  Eigen::Index dim_k() const { return dim_k_; }
  const Vector& xi() const { return xi_; }
  const Matrix& u() const { return u_; }
  const Matrix& meter() const { return meter_; }
  const SpectralDecomposition& meter_spectrum() const { return meter_sd_; }
  const Tolerances& tol() const { return tol_; }

 private:
  Eigen::Index dim_h_ = 0, dim_k_ = 0;
  Vector xi_;
  Matrix u_, meter_;
  SpectralDecomposition meter_sd_;
  Tolerances tol_;
};

struct OutcomeDistribution {
  std::vector<double> eigenvalues;    // meter cluster representatives, ascending
  std::vector<double> probabilities;  // sum to 1
};

struct Povm {
  std::vector<double> eigenvalues;
  std::vector<Matrix> effects;  // positive semidefinite, sum to identity
};

// Eigenbasis-resolved probe vectors X_{μρρ'} of an Araki-Yanase type process.
struct ArakiYanaseDecomposition {
  std::vector<double> eigenvalues;          // A-cluster representatives μ
  std::vector<Matrix> object_projectors;    // E^A({μ})
  // probe_vectors[m] is a (rank × rank) grid, row ρ, column ρ', flattened
  // row-major; vectors are generally unnormalized.
  std::vector<std::vector<Vector>> probe_vectors;
  std::vector<Eigen::Index> ranks;          // cluster ranks
  double reconstruction_residual = 0.0;     // worst U|φ_{μρ}⊗ξ⟩ rebuild error
  double orthogonality_residual = 0.0;      // worst cross-μ inner product
  double meter_residual = 0.0;              // worst distance from μ-eigenspace of M
};

struct AyFailure {
  bool not_precise = false;
  bool not_nondisturbing = false;
  Eigen::Index witness_basis_index = -1;  // basis state exhibiting the failure
  double witness_norm = 0.0;              // ‖N(e_i⊗ξ)‖ or ‖D(e_i⊗ξ)‖ there
  std::string to_string() const;
};

struct AyResult {
  std::optional<ArakiYanaseDecomposition> decomposition;
  std::optional<AyFailure> failure;
  bool ok() const { return decomposition.has_value(); }
};

struct RepeatabilityReport {
  std::vector<double> a_values;  // A-cluster representatives (Γ axis)
  std::vector<double> m_values;  // M-cluster representatives (Δ axis)
  // joint(g, d) = Pr{x ∈ Δ_d, y ∈ Γ_g} for the worst test state
  Eigen::MatrixXd joint;
  double max_deviation = 0.0;    // worst |joint − Pr{x ∈ Δ∩Γ}| over all states
  Eigen::Index worst_state = -1; // index into the test-state ensemble
  bool satisfied = false;
};

// Pr{x ∈ Δ_μ} = ‖(I⊗E^M(μ)) U |ψ⊗ξ⟩‖² per meter cluster.
OutcomeDistribution output_distribution(const MeasuringProcess& p, const Vector& psi);

// Effect Π_μ = partial_inner(ξ, U†(I⊗E^M(μ))U, dim_h).
Povm extract_povm(const MeasuringProcess& p);

// N = U†(I⊗M)U − A⊗I.
Matrix noise_operator(const MeasuringProcess& p, const Matrix& a);

// ε(A,ψ) = ‖N|ψ⊗ξ⟩‖.
double rms_noise(const MeasuringProcess& p, const Matrix& a, const Vector& psi);

// D = U†(B⊗I)U − B⊗I.
Matrix disturbance_operator(const MeasuringProcess& p, const Matrix& b);

// η(B,ψ) = ‖D|ψ⊗ξ⟩‖.
double rms_disturbance(const MeasuringProcess& p, const Matrix& b, const Vector& psi);

// max_i ‖N(e_i⊗ξ)‖ over the computational basis (noise) / same for D
// (disturbance); preciseness and nondisturbance are linear in ψ, so the
// basis sup decides them for every state.
double noise_basis_sup(const MeasuringProcess& p, const Matrix& a);
double disturbance_basis_sup(const MeasuringProcess& p, const Matrix& b);

bool is_precise(const MeasuringProcess& p, const Matrix& a, const Tolerances& tol = {});
bool is_nondisturbing(const MeasuringProcess& p, const Matrix& b, const Tolerances& tol = {});

// Joint repeated-measurement distribution over (Δ, Γ) cluster pairs,
// tested on the computational basis plus 20 seeded random states.
RepeatabilityReport check_repeatability(const MeasuringProcess& p, const Matrix& a,
                                        const Tolerances& tol = {},
                                        std::uint64_t seed = 0);

// Succeeds iff the process precisely and nondestructively measures A;
// on success carries the verified X_{μρρ'} = (⟨φ_{μρ'}|⊗I) U |φ_{μρ}⊗ξ⟩.
AyResult detect_araki_yanase(const MeasuringProcess& p, const Matrix& a,
                             const Tolerances& tol = {});

}  // namespace qmlim
