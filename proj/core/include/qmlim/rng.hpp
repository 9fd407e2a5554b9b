// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qmlim {

// Deterministic random source. std::mt19937_64 has a fixed cross-platform
// stream; the distributions are hand-rolled because the standard ones are
// implementation-defined and frozen test values depend on the exact stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Complex cgauss() {
    double re = gauss(), im = gauss();
    return {re, im};
  }

  // Haar-distributed unit vector
  Vector haar_state(Eigen::Index dim) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cgauss();
    v.normalize();
    return v;
  }

  // GUE-style Hermitian matrix (G + G†)/2 with standard complex Gaussian G
  Matrix gaussian_hermitian(Eigen::Index dim) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cgauss();
    return (g + g.adjoint()) / 2.0;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qmlim
