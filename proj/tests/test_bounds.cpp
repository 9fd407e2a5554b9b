// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "qmlim/io.hpp"
#include "qmlim/models.hpp"
#include "qmlim/rng.hpp"
#include "test_util.hpp"

using namespace qmlim;
using namespace qmlim_test;

namespace {

const LoadedModel& model_3x2() {
  static LoadedModel lm = load_model(data_path("model_3x2.json"));
  return lm;
}

Matrix plus_projector() { return (Matrix::Identity(2, 2) + pauli_x()) / 2.0; }

}  // namespace

TEST_CASE("commutator identity holds on conserving models") {
  const NamedModel& m = model_3x2().model;
  const ConservedPair& c = m.conserved.front();
  CHECK(commutator_identity_residual(m.process, m.observable, c.l1, c.l2) <= 1e-12);
  // The plain-L₂ display variant is NOT an identity here.
  CHECK(commutator_identity_residual_displayed(m.process, m.observable, c.l1, c.l2) ==
        doctest::Approx(4.882622246293481).epsilon(1e-10));

  NamedModel ex1 = build_example1();
  const ConservedPair& cx = ex1.conserved.front();
  CHECK(commutator_identity_residual(ex1.process, ex1.observable, cx.l1, cx.l2) <= 1e-9);
}

TEST_CASE("commutator identity refuses non-conserving pairs") {
  NamedModel cnot = build_cnot_model();
  // [diag(1,2)⊗diag(1,3), U] ≠ 0 for the controlled-not, and the pair equals
  // its own modulus, so the precondition check fires.
  CHECK_THROWS_AS(commutator_identity_residual(cnot.process, cnot.observable,
                                               diag_matrix({1, 2}), diag_matrix({1, 3})),
                  ConservationViolated);
}

TEST_CASE("Yanase-form bound frozen values") {
  Matrix a = pauli_z();
  Matrix l1 = plus_projector();
  Matrix l2 = diag_matrix({1, 2});
  Vector xi = plus_state();

  Vector psi_real = basis_state(2, 0);
  CHECK(bound_yanase(a, l1, l2, psi_real, xi) <= 1e-14);

  Vector psi_imag(2);
  psi_imag << Complex(1 / std::sqrt(2.0)), Complex(0, 1 / std::sqrt(2.0));
  CHECK(bound_yanase(a, l1, l2, psi_imag, xi) == doctest::Approx(0.45).epsilon(1e-13));

  auto rc = ratio_and_cv(l2, xi);
  CHECK(rc.first == doctest::Approx(0.9).epsilon(1e-13));
  CHECK(rc.second == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("general bound on the 3x2 golden model") {
  const NamedModel& m = model_3x2().model;
  const ConservedPair& c = m.conserved.front();
  const Vector& psi = m.psi_list[3];

  double eps = rms_noise(m.process, m.observable, psi);
  CHECK(eps * eps == doctest::Approx(1.7343367706729156).epsilon(1e-13));
  double rhs = bound_general(m.process, m.observable, c.l1, c.l2, psi);
  CHECK(rhs == doctest::Approx(1.6167832167832174e-4).epsilon(1e-10));
  CHECK(eps * eps >= rhs - 1e-8);

  // Under a satisfied Yanase condition the two bound forms agree.
  double ry = bound_yanase(m.observable, c.l1, c.l2, psi, m.process.xi());
  CHECK(std::abs(ry - rhs) <= 1e-12);

  auto rc = ratio_and_cv(c.l2, m.process.xi());
  CHECK(rc.first == doctest::Approx(0.8892307692307694).epsilon(1e-13));
  CHECK(rc.second == doctest::Approx(0.352941176470588).epsilon(1e-12));
}

TEST_CASE("kernel states are detected, not divided by") {
  NamedModel ex2 = build_example2();
  const ConservedPair& c = ex2.conserved.front();
  Vector minus(2);
  minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK_THROWS_AS(bound_general(ex2.process, ex2.observable, c.l1, c.l2, minus),
                  KernelState);
  CHECK_THROWS_AS(bound_yanase(ex2.observable, c.l1, c.l2, minus, ex2.process.xi()),
                  KernelState);
  Vector xi_kernel(2);
  xi_kernel << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK_THROWS_AS(ratio_and_cv(c.l2, xi_kernel), KernelState);
}

TEST_CASE("Heisenberg-Robertson starting inequality") {
  auto models = random_model_ensemble(2, 3, 4, 51, true);
  Rng rng(52);
  for (const NamedModel& m : models) {
    const ConservedPair& c = m.conserved.front();
    for (int k = 0; k < 5; ++k) {
      Vector psi = rng.haar_state(m.process.dim_h());
      HrCheck hr = hr_check(m.process, m.observable, c.l1, c.l2, psi);
      CHECK(hr.lhs >= hr.rhs - 1e-8);
    }
  }
}

TEST_CASE("optimal probe distribution closed form") {
  ProbeOptimum o12 = optimal_probe_distribution({1, 2});
  CHECK(o12.p_min == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(o12.p_max == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(o12.r_min == doctest::Approx(8.0 / 9.0).epsilon(1e-14));

  ProbeOptimum o15 = optimal_probe_distribution({1, 5});
  CHECK(o15.p_min == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK(o15.r_min == doctest::Approx(5.0 / 9.0).epsilon(1e-14));

  // Middle eigenvalues get zero probability: only the extremes matter.
  ProbeOptimum o125 = optimal_probe_distribution({1, 2, 5});
  CHECK(o125.l_min == 1.0);
  CHECK(o125.l_max == 5.0);
  CHECK(o125.r_min == doctest::Approx(5.0 / 9.0).epsilon(1e-14));

  CHECK_THROWS_AS(optimal_probe_distribution({1}), TooFewLevels);
  CHECK_THROWS_AS(optimal_probe_distribution({2, 1}), NotAscending);
  CHECK_THROWS_AS(optimal_probe_distribution({0, 1}), NonPositiveSpectrum);
  CHECK_THROWS_AS(optimal_probe_distribution({-1, 2}), NonPositiveSpectrum);
  CHECK_THROWS_AS(optimal_probe_distribution({2, 2}), ConstantModulus);
}

TEST_CASE("optimal probe state lives on the extreme eigenspaces") {
  // diag(1,3,2): eigenvalues ascend as (1,2,3) with the value 3 sitting at
  // index 1 — the optimal state must avoid index 2 (value 2).
  ProbeOptimum opt = optimal_probe_state(diag_matrix({1, 3, 2}));
  CHECK(opt.r_min == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(opt.p_min == doctest::Approx(0.75).epsilon(1e-14));
  REQUIRE(opt.state.size() == 3);
  CHECK(std::abs(opt.state(0)) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK(std::abs(opt.state(1)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(opt.state(2)) <= 1e-12);

  auto rc = ratio_and_cv(diag_matrix({1, 3, 2}), opt.state);
  CHECK(rc.first == doctest::Approx(opt.r_min).epsilon(1e-13));

  // Negative eigenvalues enter through the modulus.
  ProbeOptimum neg = optimal_probe_state(diag_matrix({-1, 2}));
  CHECK(neg.l_min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(neg.r_min == doctest::Approx(8.0 / 9.0).epsilon(1e-14));

  CHECK_THROWS_AS(optimal_probe_state(Matrix::Identity(2, 2)), ConstantModulus);
  CHECK_THROWS_AS(optimal_probe_state(diag_matrix({0, 1})), NonPositiveSpectrum);
  CHECK_THROWS_AS(optimal_probe_state(pauli_x()), ConstantModulus);
}

TEST_CASE("grid searches cross-check the closed forms") {
  CHECK(std::abs(grid_min_ratio({1, 2}, 1e-3) - 8.0 / 9.0) <= 1e-4);
  CHECK(std::abs(grid_min_ratio({1, 2, 5}, 1e-2) - 5.0 / 9.0) <= 1e-3);
  CHECK(ratio_at({1, 2}, {2.0 / 3.0, 1.0 / 3.0}) ==
        doctest::Approx(8.0 / 9.0).epsilon(1e-14));
  CHECK_THROWS_AS(ratio_at({1, 2}, {0.5, 0.25, 0.25}), DimensionMismatch);
  CHECK_THROWS_AS(grid_min_ratio({1, 2, 3, 4}, 1e-2), Error);

  // The ratio minimizer and the variance maximizer are different points.
  std::vector<double> vm = variance_maximizer_check({1, 2});
  REQUIRE(vm.size() == 2);
  CHECK(vm[0] == 0.5);
  CHECK(vm[1] == 0.5);
  CHECK(ratio_at({1, 2}, vm) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(grid_max_variance({1, 2}, 1e-3) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("difference-denominator variant is not a valid ratio minimum") {
  // 4·l_m·l_M/(l_M−l_m)² evaluates to 8 for the spectrum (1,2): greater than
  // 1, impossible for a minimum of R ∈ (0,1]; the sum-denominator form is
  // the consistent one.
  const double lm = 1, lM = 2;
  const double difference_form = 4 * lm * lM / ((lM - lm) * (lM - lm));
  CHECK(difference_form > 1.0);
  CHECK(optimal_probe_distribution({lm, lM}).r_min <= 1.0);
}

TEST_CASE("R equals 1/(1+CV^2)") {
  Rng rng(77);
  for (int k = 0; k < 25; ++k) {
    Matrix l2 = rng.gaussian_hermitian(3);
    Vector xi = rng.haar_state(3);
    try {
      auto [r, cv] = ratio_and_cv(l2, xi);
      CHECK(std::abs(r - 1.0 / (1.0 + cv * cv)) <= 1e-10);
    } catch (const KernelState&) {
      // measure-zero event; acceptable to skip
    }
  }
}

TEST_CASE("consistency report on the controlled-Hadamard model") {
  NamedModel ex1 = build_example1();
  WayReport w = verify_way_consistency(ex1.process, ex1.observable,
                                       ex1.conserved.front());
  CHECK(w.kind == LawKind::multiplicative);
  CHECK(w.precise);
  CHECK(w.nondisturbing);
  CHECK(w.conservation_residual <= 1e-12);
  CHECK(w.yanase_residual <= 1e-12);
  CHECK(w.comm_a_l1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(w.comm_a_absl1 <= 1e-12);
  CHECK(w.l2_min_abs_eig == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(w.identity_residual.has_value());
  CHECK(*w.identity_residual <= 1e-9);
  CHECK(w.bound_rows.size() == 22);  // 2 basis + 20 random states
  CHECK(w.consistent());
  CHECK(std::string(w.verdict()) == "CONSISTENT");
}

TEST_CASE("consistency report on the imprecise 3x2 model") {
  const NamedModel& m = model_3x2().model;
  WayReport w = verify_way_consistency(m.process, m.observable, m.conserved.front());
  CHECK_FALSE(w.precise);
  CHECK_FALSE(w.nondisturbing);
  CHECK(w.conservation_residual <= 1e-12);
  REQUIRE(w.identity_residual.has_value());
  CHECK(*w.identity_residual <= 1e-9);
  CHECK(w.identity_residual_displayed.has_value());
  CHECK(w.bound_rows.size() == 23);
  for (const BoundReport& row : w.bound_rows) {
    if (row.kernel) continue;
    CHECK(row.epsilon_sq >= row.rhs_general - 1e-8);
    REQUIRE(row.rhs_yanase.has_value());
    CHECK(row.epsilon_sq >= *row.rhs_yanase - 1e-8);
  }
  CHECK(w.consistent());
}

TEST_CASE("consistency report on an additive law") {
  NamedModel cnot = build_cnot_model();
  WayReport w = verify_way_consistency(cnot.process, cnot.observable,
                                       cnot.conserved.front());
  CHECK(w.kind == LawKind::additive);
  CHECK(w.precise);
  CHECK(w.nondisturbing);
  CHECK(w.comm_a_l1 <= 1e-12);  // [σz, σz] = 0: the classical gate is happy
  CHECK_FALSE(w.identity_residual.has_value());
  CHECK(w.bound_rows.empty());
  CHECK(w.consistent());
}

TEST_CASE("invariant product state golden") {
  NamedModel cnot = build_cnot_model();
  Matrix rho1 = diag_matrix({0.3, 0.7});
  Matrix rho2 = Matrix::Identity(2, 2) / 2.0;
  InvariantStateReport rep = check_invariant_state(cnot.process, rho1, rho2,
                                                   cnot.observable);
  CHECK(rep.invariance_residual <= 1e-12);
  CHECK(rep.rho2_min_eigenvalue == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rep.commutator_a_rho1 <= 1e-14);

  CHECK_THROWS_AS(check_invariant_state(cnot.process, 2.0 * rho1, rho2,
                                        cnot.observable),
                  NotDensityOperator);
  CHECK_THROWS_AS(check_invariant_state(cnot.process, diag_matrix({1.5, -0.5}),
                                        rho2, cnot.observable),
                  NotDensityOperator);
  CHECK_THROWS_AS(check_invariant_state(cnot.process, rho1,
                                        Matrix::Identity(3, 3) / 3.0,
                                        cnot.observable),
                  DimensionMismatch);
}
