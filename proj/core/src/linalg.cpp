// SPDX-License-Identifier: Apache-2.0
#include "qmlim/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace qmlim {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const Matrix& m, double tol) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void require_hermitian(const Matrix& m, double tol, const char* who) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(who) + ": matrix not square");
  if (!is_hermitian(m, tol))
    throw NotHermitian(std::string(who) + ": matrix not Hermitian within tolerance");
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

SpectralDecomposition spectral_decompose(const Matrix& h, const Tolerances& tol) {
  require_hermitian(h, tol.validation, "spectral_decompose");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw Error("spectral_decompose: eigensolver failed");
  const RealVector& w = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  const Eigen::Index n = w.size();
  const double radius =
      n ? std::max(std::abs(w(0)), std::abs(w(n - 1))) : 0.0;
  const double gap = tol.cluster_gap * radius;

  SpectralDecomposition out;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && w(j + 1) - w(j) <= gap) ++j;
    double rep = w.segment(i, j - i + 1).mean();
    Matrix block = v.middleCols(i, j - i + 1);
    out.eigenvalues.push_back(rep);
    out.projectors.push_back(block * block.adjoint());
    i = j + 1;
  }
  return out;
}

Matrix apply_spectral(const Matrix& h, const Tolerances& tol,
                      const std::function<Complex(double)>& f) {
  SpectralDecomposition sd = spectral_decompose(h, tol);
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (std::size_t k = 0; k < sd.size(); ++k)
    out += f(sd.eigenvalues[k]) * sd.projectors[k];
  return out;
}

namespace {

double radius_of(const SpectralDecomposition& sd) {
  double r = 0.0;
  for (double ev : sd.eigenvalues) r = std::max(r, std::abs(ev));
  return r;
}

}  // namespace

Matrix operator_modulus(const Matrix& l, const Tolerances& tol) {
  return apply_spectral(l, tol, [](double x) { return Complex(std::abs(x), 0); });
}

Matrix operator_log_modulus(const Matrix& l, const Tolerances& tol) {
  SpectralDecomposition sd = spectral_decompose(l, tol);
  const double radius = radius_of(sd);
  Matrix out = Matrix::Zero(l.rows(), l.cols());
  for (std::size_t k = 0; k < sd.size(); ++k) {
    double a = std::abs(sd.eigenvalues[k]);
    if (a <= tol.zero_threshold * radius)
      throw SingularOperator("operator_log_modulus: eigenvalue cluster at zero");
    out += std::log(a) * sd.projectors[k];
  }
  return out;
}

Matrix kernel_projector(const Matrix& l, const Tolerances& tol) {
  SpectralDecomposition sd = spectral_decompose(l, tol);
  const double radius = radius_of(sd);
  Matrix out = Matrix::Zero(l.rows(), l.cols());
  for (std::size_t k = 0; k < sd.size(); ++k)
    if (std::abs(sd.eigenvalues[k]) <= tol.zero_threshold * radius)
      out += sd.projectors[k];
  return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw DimensionMismatch("commutator: operands must be square and equal-sized");
  return a * b - b * a;
}

double commutator_norm(const Matrix& a, const Matrix& b) {
  return spectral_norm(commutator(a, b));
}

Matrix partial_inner(const Vector& xi, const Matrix& x, Eigen::Index dim_h) {
  const Eigen::Index dk = xi.size();
  if (dim_h <= 0 || x.rows() != x.cols() || x.rows() != dim_h * dk)
    throw DimensionMismatch("partial_inner: dim(x) must equal dim_h * dim(xi)");
  Matrix out(dim_h, dim_h);
  for (Eigen::Index i = 0; i < dim_h; ++i)
    for (Eigen::Index j = 0; j < dim_h; ++j)
      out(i, j) = xi.dot(x.block(i * dk, j * dk, dk, dk) * xi);
  return out;
}

Matrix exp_i_hermitian(const Matrix& h, const Tolerances& tol) {
  return apply_spectral(h, tol, [](double x) {
    return Complex(std::cos(x), std::sin(x));
  });
}

Matrix exp_hermitian(const Matrix& h, const Tolerances& tol) {
  return apply_spectral(h, tol, [](double x) { return Complex(std::exp(x), 0); });
}

}  // namespace qmlim
