// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/measurement.hpp"

namespace qmlim {

enum class LawKind { additive, multiplicative };

const char* to_string(LawKind k);
LawKind law_kind_from_string(const std::string& s);  // throws ParseError

// A conserved-quantity candidate: L₁ on H, L₂ on K, and whether the law is
// [L₁⊗I + I⊗L₂, U] = 0 (additive) or [L₁⊗L₂, U] = 0 (multiplicative).
struct ConservedPair {
  Matrix l1;
  Matrix l2;
  LawKind kind = LawKind::multiplicative;
};

// The full conserved operator L₁⊗I + I⊗L₂ or L₁⊗L₂.
Matrix conserved_operator(const ConservedPair& c, Eigen::Index dim_h, Eigen::Index dim_k);

// ‖[L, U]‖ for the pair's conserved operator.
double conservation_residual(const MeasuringProcess& p, const ConservedPair& c);

// Yanase's condition residual ‖[M, |L₂|]‖.
double check_yanase(const MeasuringProcess& p, const Matrix& l2);

// (L₁, L₂) additive ↦ (exp L₁, exp L₂) multiplicative; both factors positive
// definite, hence invertible. Throws KindMismatch on multiplicative input.
ConservedPair exponentiate_additive(const ConservedPair& c, const Tolerances& tol = {});

// U = exp(iH′), H′ = Σ_k P_k H P_k the commutant projection of a seeded
// Gaussian Hermitian H onto the eigenprojectors of L₁⊗L₂; guarantees
// ‖[L₁⊗L₂, U]‖ ≲ 1e-12 and is deterministic per seed.
Matrix random_conserving_unitary(const Matrix& l1, const Matrix& l2,
                                 std::uint64_t seed, const Tolerances& tol = {});

}  // namespace qmlim
