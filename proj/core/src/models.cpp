// SPDX-License-Identifier: Apache-2.0
#include "qmlim/models.hpp"

#include "qmlim/rng.hpp"

#include <sstream>

namespace qmlim {

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

std::vector<Vector> default_qubit_states() {
  Vector e0(2), e1(2), plus(2), mixed(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  mixed << 0.6, 0.8;
  return {e0, e1, plus, mixed};
}

}  // namespace

NamedModel build_cnot_model() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  Vector xi(2);
  xi << 1, 0;
  NamedModel m;
  m.name = "cnot";
  m.process = MeasuringProcess::make(2, 2, xi, u, pauli_z());
  m.observable = pauli_z();
  m.psi_list = default_qubit_states();
  m.conserved = {ConservedPair{pauli_z(), Matrix::Zero(2, 2), LawKind::additive}};
  m.expected.precise = true;
  m.expected.nondisturbing = true;
  m.expected.araki_yanase = true;
  m.expected.repeatable = true;
  m.expected.conserved = {true};
  m.expected.yanase = {true};
  return m;
}

NamedModel build_example1() {
  const double s = 1 / std::sqrt(2.0);
  Matrix h(2, 2), xhx(2, 2);
  h << s, s, s, -s;        // Hadamard
  xhx << -s, s, s, s;      // σx H σx
  Matrix u = Matrix::Zero(4, 4);
  u.block(0, 0, 2, 2) = h;
  u.block(2, 2, 2, 2) = xhx;
  Vector xi(2);
  xi << s, s;  // +1 eigenvector of σx
  NamedModel m;
  m.name = "example1";
  m.process = MeasuringProcess::make(2, 2, xi, u, pauli_z());
  m.observable = pauli_z();
  m.psi_list = default_qubit_states();
  m.conserved = {ConservedPair{pauli_x(), pauli_x(), LawKind::multiplicative}};
  m.expected.precise = true;
  m.expected.nondisturbing = true;
  m.expected.araki_yanase = true;
  m.expected.repeatable = true;
  m.expected.conserved = {true};
  m.expected.yanase = {true};
  return m;
}

NamedModel build_example2() {
  Matrix proj = (Matrix::Identity(2, 2) + pauli_x()) / 2.0;  // |ã⟩⟨ã|
  return build_example2(proj);
}

NamedModel build_example2(const Matrix& l1) {
  require_hermitian(l1, Tolerances{}.validation, "build_example2 l1");
  if (l1.rows() != 2)
    throw DimensionMismatch("build_example2: l1 must be 2x2");
  NamedModel m = build_cnot_model();
  m.name = "example2";
  Matrix l2 = (Matrix::Identity(2, 2) + pauli_x()) / 2.0;  // |ξ̃⟩⟨ξ̃|
  m.conserved = {ConservedPair{l1, l2, LawKind::multiplicative}};
  m.expected.conserved = {true};
  m.expected.yanase = {false};
  return m;
}

std::vector<NamedModel> random_model_ensemble(Eigen::Index dim_h, Eigen::Index dim_k,
                                              int count, std::uint64_t seed,
                                              bool yanase) {
  if (dim_h < 2 || dim_h > 4 || dim_k < 2 || dim_k > 4)
    throw DimensionMismatch("random_model_ensemble: factor dimensions must be 2..4");
  if (count < 0)
    throw Error("random_model_ensemble: count must be nonnegative");

  const Tolerances tol;
  std::vector<NamedModel> out;
  out.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    // splitmix-style per-item stream, deterministic in (seed, idx)
    std::uint64_t item_seed =
        (seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(idx + 1));
    Rng rng(item_seed);

    Matrix l1 = rng.gaussian_hermitian(dim_h);
    Matrix l2 = rng.gaussian_hermitian(dim_k);
    if (yanase) {
      SpectralDecomposition sd = spectral_decompose(l2, tol);
      double mn = sd.eigenvalues.front();
      l2 += (std::abs(mn) + 0.5) * Matrix::Identity(dim_k, dim_k);
    }
    Matrix a = rng.gaussian_hermitian(dim_h);
    Vector xi = rng.haar_state(dim_k);
    Matrix meter;
    if (yanase) {
      // Hermitian blocks inside each |L₂| eigenspace: [M, |L₂|] = 0 by
      // construction.
      SpectralDecomposition sd = spectral_decompose(operator_modulus(l2, tol), tol);
      meter = Matrix::Zero(dim_k, dim_k);
      for (const Matrix& proj : sd.projectors) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
        std::vector<Eigen::Index> cols;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
          if (es.eigenvalues()(k) > 0.5) cols.push_back(k);
        Matrix basis(dim_k, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
          basis.col(c) = es.eigenvectors().col(cols[c]);
        Matrix block = rng.gaussian_hermitian(static_cast<Eigen::Index>(cols.size()));
        meter += basis * block * basis.adjoint();
      }
      meter = (meter + meter.adjoint()) / 2.0;
    } else {
      meter = rng.gaussian_hermitian(dim_k);
    }
    Matrix u = random_conserving_unitary(l1, l2, rng.raw(), tol);

    NamedModel m;
    std::ostringstream name;
    name << "random-" << dim_h << "x" << dim_k << "-seed" << seed << "-" << idx;
    m.name = name.str();
    m.process = MeasuringProcess::make(dim_h, dim_k, xi, u, meter, tol);
    m.observable = a;
    m.conserved = {ConservedPair{l1, l2, LawKind::multiplicative}};
    m.expected.conserved = {true};
    if (yanase) m.expected.yanase = {true};
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace qmlim
