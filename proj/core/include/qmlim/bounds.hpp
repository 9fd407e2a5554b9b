// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/conservation.hpp"

#include <optional>

namespace qmlim {

// One noise-bound evaluation at a fixed object state ψ.
struct BoundReport {
  double epsilon_sq = 0.0;    // ε(A,ψ)²
  double rhs_general = 0.0;   // commutator-expectation lower bound
  std::optional<double> rhs_yanase;  // present only when Yanase's condition holds
  double ratio_R = 1.0;       // ⟨|L₂|⟩²/⟨|L₂|²⟩ in ξ
  double cv = 0.0;            // coefficient of variation of |L₂| in ξ
  double commutator_A_absL1 = 0.0;
  double yanase_residual = 0.0;
  bool kernel = false;        // a bound denominator vanished; RHS not defined
};

// Probe-side optimum of R(|L₂|): distribution on the extreme eigenvalues and
// the minimizing probe state.
struct ProbeOptimum {
  double p_min = 0.0;   // probability on the minimum-|L₂|-eigenvalue eigenspace
  double p_max = 0.0;   // probability on the maximum
  double r_min = 1.0;
  Vector state;         // ξ_min on K (empty when only a spectrum was supplied)
  double l_min = 0.0, l_max = 0.0;  // extreme |L₂| eigenvalues
};

// Consolidated theorem-consistency report for one process + observable +
// conserved pair.
struct WayReport {
  LawKind kind = LawKind::multiplicative;
  bool precise = false;
  bool nondisturbing = false;
  double noise_sup = 0.0;          // max_i ‖N(e_i⊗ξ)‖
  double disturbance_sup = 0.0;    // max_i ‖D(e_i⊗ξ)‖
  double conservation_residual = 0.0;
  double yanase_residual = 0.0;    // ‖[M, |L₂|]‖
  double comm_a_l1 = 0.0;          // ‖[A, L₁]‖
  double comm_a_absl1 = 0.0;       // ‖[A, |L₁|]‖
  double l2_min_abs_eig = 0.0;     // smallest |eigenvalue| of L₂
  // multiplicative-law only:
  std::optional<double> identity_residual;            // verified |L₂| form
  std::optional<double> identity_residual_displayed;  // plain-L₂ first term, documentation
  std::vector<BoundReport> bound_rows;                // ψ-ensemble evaluations
  std::vector<std::string> violations;  // human-readable, empty when consistent
  bool consistent() const { return violations.empty(); }
  const char* verdict() const {
    return violations.empty() ? "CONSISTENT" : "THEOREM_VIOLATION";
  }
};

struct InvariantStateReport {
  double invariance_residual = 0.0;   // ‖U(ρ₁⊗ρ₂)U† − ρ₁⊗ρ₂‖
  double rho2_min_eigenvalue = 0.0;
  double commutator_a_rho1 = 0.0;     // ‖[A, ρ₁]‖
};

struct HrCheck {
  double lhs = 0.0;  // σ(N)² σ(|L₁⊗L₂|)²
  double rhs = 0.0;  // ¼|⟨[N, |L₁|⊗|L₂|]⟩|²
};

// ‖[N,|L₁|⊗|L₂|] − (U†(|L₁|⊗[M,|L₂|])U − [A,|L₁|]⊗|L₂|)‖; ≤ 1e-9 whenever
// the multiplicative law holds. Throws ConservationViolated otherwise.
double commutator_identity_residual(const MeasuringProcess& p, const Matrix& a,
                                    const Matrix& l1, const Matrix& l2);

// Documentation variant with the first term oriented and typed as usually
// displayed ([A,|L₁|]⊗L₂ − U†(|L₁|⊗[M,|L₂|])U); reported, never gated on.
double commutator_identity_residual_displayed(const MeasuringProcess& p, const Matrix& a,
                                              const Matrix& l1, const Matrix& l2);

// |⟨[A,|L₁|]⊗|L₂| − U†(|L₁|⊗[M,|L₂|])U⟩|² / (4⟨ψ||L₁|²|ψ⟩⟨ξ||L₂|²|ξ⟩),
// expectation in |ψ⊗ξ⟩. Guaranteed ≤ ε(A,ψ)² under the multiplicative law.
double bound_general(const MeasuringProcess& p, const Matrix& a,
                     const Matrix& l1, const Matrix& l2, const Vector& psi);

// |⟨ψ|[A,|L₁|]|ψ⟩|² R(|L₂|) / (4⟨ψ||L₁|²|ψ⟩); valid lower bound for ε² only
// under Yanase's condition (the caller checks).
double bound_yanase(const Matrix& a, const Matrix& l1, const Matrix& l2,
                    const Vector& psi, const Vector& xi, const Tolerances& tol = {});

// (R, CV) of |L₂| in ξ; R = 1/(1+CV²).
std::pair<double, double> ratio_and_cv(const Matrix& l2, const Vector& xi,
                                       const Tolerances& tol = {});

// Heisenberg-Robertson starting inequality for the noise operator against
// X = |L₁|⊗|L₂| in |ψ⊗ξ⟩; lhs ≥ rhs up to roundoff.
HrCheck hr_check(const MeasuringProcess& p, const Matrix& a,
                 const Matrix& l1, const Matrix& l2, const Vector& psi);

// Minimizer of R over probe distributions on an ascending, strictly positive
// spectrum: support on the extreme eigenvalues, p = (l_d, l₁)/(l₁+l_d).
ProbeOptimum optimal_probe_distribution(const std::vector<double>& eigenvalues);

// ξ_min = √(l_M/(l_m+l_M))|m⟩ + √(l_m/(l_m+l_M))|M⟩ in the |L₂| eigenbasis.
ProbeOptimum optimal_probe_state(const Matrix& l2, const Tolerances& tol = {});

// (1/2, 0, …, 0, 1/2) — the variance maximizer; verified against a simplex
// grid search (full grid for ≤ 3 levels). Distinct from the R minimizer.
std::vector<double> variance_maximizer_check(const std::vector<double>& eigenvalues);

// Brute-force simplex searches (supported for d ≤ 3 levels).
double grid_min_ratio(const std::vector<double>& eigenvalues, double step);
double grid_max_variance(const std::vector<double>& eigenvalues, double step);

// R evaluated at a probability distribution over the spectrum.
double ratio_at(const std::vector<double>& eigenvalues, const std::vector<double>& p);

// Consolidated consistency report; never throws — problems end up in
// violations[] and the verdict.
WayReport verify_way_consistency(const MeasuringProcess& p, const Matrix& a,
                                 const ConservedPair& c, std::uint64_t seed = 0);

// Invariant product-state check: when U(ρ₁⊗ρ₂)U† = ρ₁⊗ρ₂ with ρ₂ invertible
// and the process measures A precisely and nondestructively, [A,ρ₁] = 0.
InvariantStateReport check_invariant_state(const MeasuringProcess& p,
                                           const Matrix& rho1, const Matrix& rho2,
                                           const Matrix& a);

}  // namespace qmlim
