// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmlim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense square complex operator carrier
using Vector = Eigen::VectorXcd;   // state vector carrier
using RealVector = Eigen::VectorXd;

// Thresholds used throughout; cluster_gap and the kernel zero test are
// relative to the spectral radius of the operator at hand.
struct Tolerances {
  double cluster_gap = 1e-8;      // relative eigenvalue clustering gap
  double zero_threshold = 1e-10;  // relative "this eigenvalue is zero" test
  double validation = 1e-8;       // absolute tolerance for boolean verdicts

  Tolerances() = default;
  Tolerances(double gap, double zero, double val)
      : cluster_gap(gap), zero_threshold(zero), validation(val) {
    if (gap <= 0 || zero <= 0 || val <= 0)
      throw std::invalid_argument("tolerances must be strictly positive");
  }
};

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QMLIM_ERROR(NAME)                                       \
  struct NAME : Error {                                         \
    explicit NAME(const std::string& what) : Error(what) {}     \
  }

QMLIM_ERROR(DimensionMismatch);
QMLIM_ERROR(NotHermitian);
QMLIM_ERROR(NotUnitary);
QMLIM_ERROR(InvalidState);
QMLIM_ERROR(SingularOperator);    // log of an operator with a kernel
QMLIM_ERROR(KernelState);         // bound denominator vanishes
QMLIM_ERROR(KindMismatch);        // additive op fed a multiplicative pair etc.
QMLIM_ERROR(ConservationViolated);
QMLIM_ERROR(NotDensityOperator);
QMLIM_ERROR(ConstantModulus);     // |L2| proportional to identity
QMLIM_ERROR(NonPositiveSpectrum); // probe optimization needs |eig| > 0
QMLIM_ERROR(TooFewLevels);
QMLIM_ERROR(NotAscending);
QMLIM_ERROR(ParseError);

#undef QMLIM_ERROR

// Spectral decomposition after degeneracy clustering: ascending cluster
// representatives with one orthogonal projector per cluster.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // cluster representatives, ascending
  std::vector<Matrix> projectors;   // Hermitian, idempotent, mutually orthogonal

  std::size_t size() const { return eigenvalues.size(); }
};

}  // namespace qmlim
