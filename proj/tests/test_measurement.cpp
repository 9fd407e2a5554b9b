// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "qmlim/io.hpp"
#include "qmlim/models.hpp"
#include "test_util.hpp"

using namespace qmlim;
using namespace qmlim_test;

namespace {

const NamedModel& cnot() {
  static NamedModel m = build_cnot_model();
  return m;
}

const LoadedModel& model_3x2() {
  static LoadedModel lm = load_model(data_path("model_3x2.json"));
  return lm;
}

}  // namespace

TEST_CASE("measuring process construction validates its inputs") {
  Vector xi = basis_state(2, 0);
  Matrix u = cnot().process.u();
  Matrix m = pauli_z();

  CHECK_NOTHROW(MeasuringProcess::make(2, 2, xi, u, m));
  CHECK_THROWS_AS(MeasuringProcess::make(2, 2, 2.0 * xi, u, m), InvalidState);
  CHECK_THROWS_AS(MeasuringProcess::make(2, 2, xi, 2.0 * u, m), NotUnitary);
  CHECK_THROWS_AS(MeasuringProcess::make(2, 2, xi, u, Complex(0, 1) * pauli_x()),
                  NotHermitian);
  CHECK_THROWS_AS(MeasuringProcess::make(3, 2, xi, u, m), DimensionMismatch);
  CHECK_THROWS_AS(MeasuringProcess::make(2, 3, xi, u, m), DimensionMismatch);
}

TEST_CASE("controlled-not model measures sigma-z exactly") {
  const MeasuringProcess& p = cnot().process;
  const Matrix a = pauli_z();

  CHECK(noise_basis_sup(p, a) <= 1e-14);
  CHECK(disturbance_basis_sup(p, a) <= 1e-14);
  CHECK(is_precise(p, a));
  CHECK(is_nondisturbing(p, a));
  CHECK(rms_noise(p, a, plus_state()) <= 1e-14);

  // Measuring σx with this process instead is maximally noisy on the basis.
  CHECK(rms_noise(p, pauli_x(), basis_state(2, 0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(rms_disturbance(p, pauli_x(), basis_state(2, 1)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_FALSE(is_precise(p, pauli_x()));
}

TEST_CASE("noise and disturbance operators have the defining form") {
  const MeasuringProcess& p = cnot().process;
  // N = U†(I⊗σz)U − σz⊗I = σz⊗σz − σz⊗I: nonzero as an operator (norm 2),
  // but it annihilates every ψ⊗ξ — which is what exact measurement means.
  Matrix n = noise_operator(p, pauli_z());
  CHECK(spectral_norm(n) == doctest::Approx(2.0).epsilon(1e-12));
  for (Eigen::Index i = 0; i < 2; ++i)
    CHECK((n * tensor(basis_state(2, i), p.xi())).norm() <= 1e-14);

  Matrix d = disturbance_operator(p, pauli_x());
  // U†(σx⊗I)U − σx⊗I for the controlled-not: ‖D‖ = 2.
  CHECK(spectral_norm(d) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("output distribution and POVM for the controlled-not") {
  const MeasuringProcess& p = cnot().process;

  OutcomeDistribution od = output_distribution(p, plus_state());
  REQUIRE(od.eigenvalues.size() == 2);
  CHECK(od.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(od.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(od.probabilities[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(od.probabilities[1] == doctest::Approx(0.5).epsilon(1e-14));

  Povm povm = extract_povm(p);
  REQUIRE(povm.effects.size() == 2);
  // μ = −1 responds to |a₂⟩, μ = +1 to |a₁⟩.
  CHECK(spectral_norm(povm.effects[0] - diag_matrix({0, 1})) <= 1e-14);
  CHECK(spectral_norm(povm.effects[1] - diag_matrix({1, 0})) <= 1e-14);
}

TEST_CASE("POVM of the 3x2 golden model") {
  const MeasuringProcess& p = model_3x2().model.process;
  Povm povm = extract_povm(p);
  REQUIRE(povm.effects.size() == 2);

  // Frozen first rows of the two effects.
  const Matrix& e0 = povm.effects[0];
  CHECK(std::abs(e0(0, 0) - Complex(0.09000000000000002)) <= 1e-15);
  CHECK(std::abs(e0(0, 1) - Complex(-0.18000000000000005, -0.10392304845413265)) <= 1e-15);
  CHECK(std::abs(e0(0, 2)) <= 1e-15);
  const Matrix& e1 = povm.effects[1];
  CHECK(std::abs(e1(0, 0) - Complex(0.91)) <= 1e-15);
  CHECK(std::abs(e1(0, 1) - Complex(0.18000000000000005, 0.10392304845413265)) <= 1e-15);

  // Normalization and positivity.
  Matrix sum = Matrix::Zero(3, 3);
  for (const Matrix& e : povm.effects) {
    sum += e;
    SpectralDecomposition sd = spectral_decompose(e, p.tol());
    CHECK(sd.eigenvalues.front() >= -1e-12);
  }
  CHECK(spectral_norm(sum - Matrix::Identity(3, 3)) <= 1e-12);

  // POVM route agrees with the direct output distribution.
  const Vector& psi = model_3x2().model.psi_list[3];
  OutcomeDistribution od = output_distribution(p, psi);
  CHECK(od.probabilities[0] == doctest::Approx(0.4644615242270662).epsilon(1e-13));
  CHECK(od.probabilities[1] == doctest::Approx(0.5355384757729338).epsilon(1e-13));
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    double via_povm = std::real(psi.dot(povm.effects[i] * psi));
    CHECK(std::abs(via_povm - od.probabilities[i]) <= 1e-12);
  }
}

TEST_CASE("basis sups of the 3x2 golden model") {
  const LoadedModel& lm = model_3x2();
  CHECK(noise_basis_sup(lm.model.process, lm.model.observable) ==
        doctest::Approx(1.3885243966167826).epsilon(1e-13));
  CHECK(disturbance_basis_sup(lm.model.process, lm.model.observable) ==
        doctest::Approx(0.8561344210136609).epsilon(1e-13));
}

TEST_CASE("repeatability holds for the controlled-not and fails off-diagonal") {
  const MeasuringProcess& p = cnot().process;

  RepeatabilityReport ok = check_repeatability(p, pauli_z());
  CHECK(ok.satisfied);
  CHECK(ok.max_deviation <= 1e-10);
  REQUIRE(ok.a_values.size() == 2);
  REQUIRE(ok.m_values.size() == 2);

  RepeatabilityReport bad = check_repeatability(p, pauli_x());
  CHECK_FALSE(bad.satisfied);
  // The computational-basis states already witness a deviation of 1/2.
  CHECK(bad.max_deviation >= 0.5 - 1e-12);

  RepeatabilityReport far = check_repeatability(model_3x2().model.process,
                                                model_3x2().model.observable);
  CHECK_FALSE(far.satisfied);
  CHECK(far.max_deviation >= 0.6608688564435402 - 1e-12);
  CHECK(far.worst_state >= 0);
}

TEST_CASE("repeatability is deterministic per seed") {
  const MeasuringProcess& p = model_3x2().model.process;
  const Matrix& a = model_3x2().model.observable;
  RepeatabilityReport r1 = check_repeatability(p, a, p.tol(), 5);
  RepeatabilityReport r2 = check_repeatability(p, a, p.tol(), 5);
  CHECK(r1.max_deviation == r2.max_deviation);
  CHECK(r1.worst_state == r2.worst_state);
}

TEST_CASE("eigenbasis decomposition succeeds exactly on exact measurements") {
  const MeasuringProcess& p = cnot().process;
  AyResult res = detect_araki_yanase(p, pauli_z());
  REQUIRE(res.ok());
  const ArakiYanaseDecomposition& ay = *res.decomposition;
  REQUIRE(ay.eigenvalues.size() == 2);
  CHECK(ay.ranks[0] == 1);
  CHECK(ay.ranks[1] == 1);
  CHECK(ay.reconstruction_residual <= 1e-12);
  CHECK(ay.orthogonality_residual <= 1e-12);
  CHECK(ay.meter_residual <= 1e-12);

  // μ = −1 cluster is |a₂⟩: U|a₂⊗ξ₁⟩ = |a₂⊗ξ₂⟩, so X = (0, 1).
  REQUIRE(ay.probe_vectors[0].size() == 1);
  CHECK(std::abs(ay.probe_vectors[0][0](0)) <= 1e-14);
  CHECK(std::abs(std::abs(ay.probe_vectors[0][0](1)) - 1.0) <= 1e-14);
  // μ = +1 cluster is |a₁⟩: U|a₁⊗ξ₁⟩ = |a₁⊗ξ₁⟩, so X = (1, 0).
  CHECK(std::abs(std::abs(ay.probe_vectors[1][0](0)) - 1.0) <= 1e-14);
  CHECK(std::abs(ay.probe_vectors[1][0](1)) <= 1e-14);
}

TEST_CASE("eigenbasis decomposition reports the failing direction") {
  const MeasuringProcess& p = cnot().process;

  AyResult res = detect_araki_yanase(p, pauli_x());
  REQUIRE_FALSE(res.ok());
  REQUIRE(res.failure.has_value());
  CHECK(res.failure->not_precise);
  CHECK_FALSE(res.failure->not_nondisturbing);
  CHECK(res.failure->witness_basis_index >= 0);
  CHECK(res.failure->witness_norm ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(res.failure->to_string().find("precise") != std::string::npos);

  AyResult far = detect_araki_yanase(model_3x2().model.process,
                                     model_3x2().model.observable);
  REQUIRE_FALSE(far.ok());
  CHECK(far.failure->not_precise);
  CHECK(far.failure->witness_norm == doctest::Approx(1.3885243966167826).epsilon(1e-13));
}

TEST_CASE("decomposition rank respects degenerate observable clusters") {
  // The do-nothing process (U = I, meter σz, ξ = e₀) measures A = I exactly:
  // the meter reads +1 with certainty and nothing is disturbed. A has a
  // single rank-3 eigenvalue cluster, exercising the degenerate bookkeeping.
  Vector xi = basis_state(2, 0);
  Matrix u = Matrix::Identity(6, 6);
  MeasuringProcess p = MeasuringProcess::make(3, 2, xi, u, pauli_z());
  AyResult res = detect_araki_yanase(p, Matrix::Identity(3, 3));
  REQUIRE(res.ok());
  REQUIRE(res.decomposition->ranks.size() == 1);
  CHECK(res.decomposition->ranks[0] == 3);
  CHECK(res.decomposition->eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
}
