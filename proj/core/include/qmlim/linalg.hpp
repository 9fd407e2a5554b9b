// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/types.hpp"

#include <functional>

namespace qmlim {

// Largest singular value.
double spectral_norm(const Matrix& m);

// Relative Hermiticity defect ‖m − m†‖ / max(1, ‖m‖).
bool is_hermitian(const Matrix& m, double tol);
void require_hermitian(const Matrix& m, double tol, const char* who);
bool is_unitary(const Matrix& m, double tol);

// Kronecker product, row-major convention: (i⊗j) ↦ i*dim(b)+j.
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

// Hermitian eigendecomposition with relative-gap degeneracy clustering.
// A new cluster starts when consecutive eigenvalues differ by more than
// cluster_gap * spectral radius; the representative is the mean of the
// cluster members (multiplicity-weighted).
SpectralDecomposition spectral_decompose(const Matrix& h, const Tolerances& tol = {});

// Σ f(λ_k) P_k over the clustered decomposition.
Matrix apply_spectral(const Matrix& h, const Tolerances& tol,
                      const std::function<Complex(double)>& f);

// |L| = Σ |λ_k| P_k; positive semidefinite, |L|² = L².
Matrix operator_modulus(const Matrix& l, const Tolerances& tol = {});

// log|L| = Σ log|λ_k| P_k; throws SingularOperator when a cluster sits at 0.
Matrix operator_log_modulus(const Matrix& l, const Tolerances& tol = {});

// Projector onto the zero-eigenvalue clusters (identity for the zero matrix,
// zero when L is invertible).
Matrix kernel_projector(const Matrix& l, const Tolerances& tol = {});

// Spectral norm of ab − ba.
double commutator_norm(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

// ⟨i⊗ξ| X |j⊗ξ⟩ as a dim_h×dim_h matrix (partial inner product over K).
Matrix partial_inner(const Vector& xi, const Matrix& x, Eigen::Index dim_h);

// exp(iH) for Hermitian H, via the spectral decomposition.
Matrix exp_i_hermitian(const Matrix& h, const Tolerances& tol = {});

// exp(H) for Hermitian H (positive definite result).
Matrix exp_hermitian(const Matrix& h, const Tolerances& tol = {});

}  // namespace qmlim
