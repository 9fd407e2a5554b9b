// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/bounds.hpp"

#include <optional>
#include <string>

namespace qmlim {

// Declared verdicts a model is expected to produce; unset fields are not
// compared. The conserved/yanase vectors align with the conserved pairs.
struct ExpectedVerdicts {
  std::optional<bool> precise;
  std::optional<bool> nondisturbing;
  std::optional<bool> araki_yanase;
  std::optional<bool> repeatable;
  std::vector<bool> conserved;
  std::vector<bool> yanase;
};

struct NamedModel {
  std::string name;
  MeasuringProcess process;
  Matrix observable;                  // the measured A
  std::vector<Vector> psi_list;       // object states for tables
  std::vector<ConservedPair> conserved;
  ExpectedVerdicts expected;
};

// Qubit object + qubit probe, ξ = ξ₁, U = controlled-NOT
// (|a₁⟩⟨a₁|⊗I + |a₂⟩⟨a₂|⊗σx), M = σz, A = σz. Precise, nondisturbing,
// repeatable; carries the additive pair (σz, 0) it conserves.
NamedModel build_cnot_model();

// Controlled-Hadamard variant (|a₁⟩⟨a₁|⊗H + |a₂⟩⟨a₂|⊗σxHσx) with ξ the +1
// eigenvector of σx: the conserving realization of the qubit model for the
// multiplicative pair (σx, σx). A = M = σz; still precise and nondisturbing,
// and [A,|L₁|] = 0 while [A, L₁] ≠ 0.
NamedModel build_example1();

// Controlled-NOT with the rank-one multiplicative pair (L₁, |ξ̃⟩⟨ξ̃|),
// ξ̃ = (ξ₁+ξ₂)/√2; conserved for every Hermitian L₁, L₂ not invertible.
// Default L₁ = |ã⟩⟨ã| with ã = (a₁+a₂)/√2 gives ‖[A,|L₁|]‖ = 1.
NamedModel build_example2();
NamedModel build_example2(const Matrix& l1);

// Seeded random conserving models: Hermitian L₁, L₂ (shifted positive
// definite when yanase is set, making L₂ invertible), U from the commutant
// projection, random A; with yanase set the meter is built block-diagonal in
// the |L₂| eigenbasis so [M,|L₂|] = 0 by construction. Deterministic per
// (seed, index).
std::vector<NamedModel> random_model_ensemble(Eigen::Index dim_h, Eigen::Index dim_k,
                                              int count, std::uint64_t seed,
                                              bool yanase);

}  // namespace qmlim
