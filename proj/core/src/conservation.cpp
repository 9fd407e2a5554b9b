// SPDX-License-Identifier: Apache-2.0
#include "qmlim/conservation.hpp"

#include "qmlim/rng.hpp"

namespace qmlim {

const char* to_string(LawKind k) {
  return k == LawKind::additive ? "additive" : "multiplicative";
}

LawKind law_kind_from_string(const std::string& s) {
  if (s == "additive") return LawKind::additive;
  if (s == "multiplicative") return LawKind::multiplicative;
  throw ParseError("unknown conservation-law kind: '" + s + "'");
}

Matrix conserved_operator(const ConservedPair& c, Eigen::Index dim_h, Eigen::Index dim_k) {
  if (c.l1.rows() != dim_h || c.l1.cols() != dim_h ||
      c.l2.rows() != dim_k || c.l2.cols() != dim_k)
    throw DimensionMismatch("conserved_operator: factor dimensions must match (H, K)");
  if (c.kind == LawKind::additive)
    return tensor(c.l1, Matrix::Identity(dim_k, dim_k)) +
           tensor(Matrix::Identity(dim_h, dim_h), c.l2);
  return tensor(c.l1, c.l2);
}

double conservation_residual(const MeasuringProcess& p, const ConservedPair& c) {
  require_hermitian(c.l1, p.tol().validation, "conservation_residual l1");
  require_hermitian(c.l2, p.tol().validation, "conservation_residual l2");
  Matrix l = conserved_operator(c, p.dim_h(), p.dim_k());
  return commutator_norm(l, p.u());
}

double check_yanase(const MeasuringProcess& p, const Matrix& l2) {
  require_hermitian(l2, p.tol().validation, "check_yanase l2");
  if (l2.rows() != p.dim_k())
    throw DimensionMismatch("check_yanase: l2 must act on K");
  return commutator_norm(p.meter(), operator_modulus(l2, p.tol()));
}

ConservedPair exponentiate_additive(const ConservedPair& c, const Tolerances& tol) {
  if (c.kind != LawKind::additive)
    throw KindMismatch("exponentiate_additive: input pair must be additive");
  require_hermitian(c.l1, tol.validation, "exponentiate_additive l1");
  require_hermitian(c.l2, tol.validation, "exponentiate_additive l2");
  return ConservedPair{exp_hermitian(c.l1, tol), exp_hermitian(c.l2, tol),
                       LawKind::multiplicative};
}

Matrix random_conserving_unitary(const Matrix& l1, const Matrix& l2,
                                 std::uint64_t seed, const Tolerances& tol) {
  require_hermitian(l1, tol.validation, "random_conserving_unitary l1");
  require_hermitian(l2, tol.validation, "random_conserving_unitary l2");
  Matrix l = tensor(l1, l2);
  SpectralDecomposition sd = spectral_decompose(l, tol);
  Rng rng(seed);
  Matrix h = rng.gaussian_hermitian(l.rows());
  Matrix hp = Matrix::Zero(l.rows(), l.cols());
  for (const Matrix& proj : sd.projectors) hp += proj * h * proj;
  return exp_i_hermitian((hp + hp.adjoint()) / 2.0, tol);
}

}  // namespace qmlim
