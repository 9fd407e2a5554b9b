// SPDX-License-Identifier: Apache-2.0
#include "qmlim/bounds.hpp"

#include "qmlim/rng.hpp"

#include <cmath>
#include <sstream>

namespace qmlim {

namespace {

constexpr double kIdentityThreshold = 1e-9;
constexpr double kKernelRelative = 1e-12;
// Theorem-gate thresholds for the consolidated report.
constexpr double kGatePrecise = 1e-8;
constexpr double kGateConserved = 1e-9;
constexpr double kGateYanase = 1e-9;
constexpr double kGateInvertible = 1e-6;
constexpr double kGateCommutator = 1e-4;
constexpr double kBoundSlack = 1e-8;

Complex expectation(const Vector& state, const Matrix& op) {
  return state.dot(op * state);
}

void require_conserved(const MeasuringProcess& p, const Matrix& l1, const Matrix& l2,
                       const char* who) {
  Matrix l = tensor(l1, l2);
  double resid = commutator_norm(l, p.u());
  double scale = std::max(1.0, spectral_norm(l));
  if (resid > p.tol().validation * scale) {
    std::ostringstream os;
    os << who << ": multiplicative conservation residual " << resid
       << " exceeds tolerance";
    throw ConservationViolated(os.str());
  }
}

struct IdentityTerms {
  Matrix lhs;         // [N, |L₁|⊗|L₂|]
  Matrix probe_term;  // U†(|L₁|⊗[M,|L₂|])U
  Matrix object_abs;  // [A,|L₁|]⊗|L₂|
  Matrix object_raw;  // [A,|L₁|]⊗L₂  (as usually displayed)
};

IdentityTerms identity_terms(const MeasuringProcess& p, const Matrix& a,
                             const Matrix& l1, const Matrix& l2) {
  const Tolerances& tol = p.tol();
  Matrix al1 = operator_modulus(l1, tol);
  Matrix al2 = operator_modulus(l2, tol);
  Matrix n = noise_operator(p, a);
  Matrix x = tensor(al1, al2);
  IdentityTerms t;
  t.lhs = commutator(n, x);
  t.probe_term = p.u().adjoint() * tensor(al1, commutator(p.meter(), al2)) * p.u();
  t.object_abs = tensor(commutator(a, al1), al2);
  t.object_raw = tensor(commutator(a, al1), l2);
  return t;
}

}  // namespace

double commutator_identity_residual(const MeasuringProcess& p, const Matrix& a,
                                    const Matrix& l1, const Matrix& l2) {
  require_conserved(p, operator_modulus(l1, p.tol()), operator_modulus(l2, p.tol()),
                    "commutator_identity_residual");
  IdentityTerms t = identity_terms(p, a, l1, l2);
  return spectral_norm(t.lhs - (t.probe_term - t.object_abs));
}

double commutator_identity_residual_displayed(const MeasuringProcess& p, const Matrix& a,
                                              const Matrix& l1, const Matrix& l2) {
  IdentityTerms t = identity_terms(p, a, l1, l2);
  return spectral_norm(t.lhs - (t.object_raw - t.probe_term));
}

namespace {

struct BoundPieces {
  double den1 = 0.0;  // ⟨ψ||L₁|²|ψ⟩
  double den2 = 0.0;  // ⟨ξ||L₂|²|ξ⟩
  double rad1 = 0.0, rad2 = 0.0;
  Matrix al1, al2;
  bool kernel1() const { return den1 <= kKernelRelative * rad1 * rad1; }
  bool kernel2() const { return den2 <= kKernelRelative * rad2 * rad2; }
};

BoundPieces bound_pieces(const Matrix& l1, const Matrix& l2,
                         const Vector& psi, const Vector& xi, const Tolerances& tol) {
  BoundPieces b;
  b.al1 = operator_modulus(l1, tol);
  b.al2 = operator_modulus(l2, tol);
  b.rad1 = spectral_norm(b.al1);
  b.rad2 = spectral_norm(b.al2);
  b.den1 = std::real(psi.dot(b.al1 * b.al1 * psi));
  b.den2 = std::real(xi.dot(b.al2 * b.al2 * xi));
  return b;
}

}  // namespace

double bound_general(const MeasuringProcess& p, const Matrix& a,
                     const Matrix& l1, const Matrix& l2, const Vector& psi) {
  const Tolerances& tol = p.tol();
  BoundPieces b = bound_pieces(l1, l2, psi, p.xi(), tol);
  require_conserved(p, b.al1, b.al2, "bound_general");
  if (b.kernel1())
    throw KernelState("bound_general: psi is in the kernel of |L1|");
  if (b.kernel2())
    throw KernelState("bound_general: xi is in the kernel of |L2|");
  Matrix diff = tensor(commutator(a, b.al1), b.al2) -
                p.u().adjoint() * tensor(b.al1, commutator(p.meter(), b.al2)) * p.u();
  Vector state = tensor(psi, p.xi());
  double num = std::norm(expectation(state, diff));
  return num / (4.0 * b.den1 * b.den2);
}

double bound_yanase(const Matrix& a, const Matrix& l1, const Matrix& l2,
                    const Vector& psi, const Vector& xi, const Tolerances& tol) {
  BoundPieces b = bound_pieces(l1, l2, psi, xi, tol);
  if (b.kernel1())
    throw KernelState("bound_yanase: psi is in the kernel of |L1|");
  if (b.kernel2())
    throw KernelState("bound_yanase: xi is in the kernel of |L2|");
  double num = std::norm(expectation(psi, commutator(a, b.al1)));
  double mean = std::real(xi.dot(b.al2 * xi));
  double ratio = mean * mean / b.den2;
  return num * ratio / (4.0 * b.den1);
}

std::pair<double, double> ratio_and_cv(const Matrix& l2, const Vector& xi,
                                       const Tolerances& tol) {
  Matrix al2 = operator_modulus(l2, tol);
  double rad = spectral_norm(al2);
  double m2 = std::real(xi.dot(al2 * al2 * xi));
  if (m2 <= kKernelRelative * rad * rad)
    throw KernelState("ratio_and_cv: xi is in the kernel of |L2|");
  double m1 = std::real(xi.dot(al2 * xi));
  double ratio = m1 * m1 / m2;
  double var = std::max(m2 - m1 * m1, 0.0);
  double cv = std::sqrt(var) / m1;
  return {ratio, cv};
}

HrCheck hr_check(const MeasuringProcess& p, const Matrix& a,
                 const Matrix& l1, const Matrix& l2, const Vector& psi) {
  const Tolerances& tol = p.tol();
  Matrix n = noise_operator(p, a);
  Matrix x = tensor(operator_modulus(l1, tol), operator_modulus(l2, tol));
  Vector state = tensor(psi, p.xi());
  auto variance = [&](const Matrix& op) {
    double m2 = std::real(state.dot(op * (op * state)));
    double m1 = std::real(state.dot(op * state));
    return std::max(m2 - m1 * m1, 0.0);
  };
  HrCheck hr;
  hr.lhs = variance(n) * variance(x);
  hr.rhs = 0.25 * std::norm(expectation(state, commutator(n, x)));
  return hr;
}

namespace {

void validate_spectrum(const std::vector<double>& eigenvalues, const char* who) {
  if (eigenvalues.size() < 2)
    throw TooFewLevels(std::string(who) + ": need at least two levels");
  for (std::size_t i = 0; i + 1 < eigenvalues.size(); ++i)
    if (eigenvalues[i + 1] < eigenvalues[i])
      throw NotAscending(std::string(who) + ": eigenvalues must be ascending");
  if (eigenvalues.front() <= 0.0)
    throw NonPositiveSpectrum(std::string(who) + ": eigenvalues must be strictly positive");
}

}  // namespace

ProbeOptimum optimal_probe_distribution(const std::vector<double>& eigenvalues) {
  validate_spectrum(eigenvalues, "optimal_probe_distribution");
  const double lm = eigenvalues.front(), lM = eigenvalues.back();
  if (lm == lM)
    throw ConstantModulus("optimal_probe_distribution: constant spectrum, R is identically 1");
  ProbeOptimum opt;
  opt.l_min = lm;
  opt.l_max = lM;
  opt.p_min = lM / (lm + lM);
  opt.p_max = lm / (lm + lM);
  opt.r_min = 4.0 * lm * lM / ((lm + lM) * (lm + lM));
  return opt;
}

ProbeOptimum optimal_probe_state(const Matrix& l2, const Tolerances& tol) {
  Matrix al2 = operator_modulus(l2, tol);
  SpectralDecomposition sd = spectral_decompose(al2, tol);
  if (sd.size() < 2)
    throw ConstantModulus("optimal_probe_state: |L2| is constant, R is identically 1");
  double radius = 0.0;
  for (double ev : sd.eigenvalues) radius = std::max(radius, std::abs(ev));
  if (sd.eigenvalues.front() <= tol.zero_threshold * radius)
    throw NonPositiveSpectrum("optimal_probe_state: |L2| must be strictly positive");

  ProbeOptimum opt = optimal_probe_distribution(sd.eigenvalues);
  auto range_vector = [](const Matrix& proj) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k)
      if (es.eigenvalues()(k) > 0.5) return Vector(es.eigenvectors().col(k));
    throw Error("optimal_probe_state: empty eigenprojector");
  };
  Vector vm = range_vector(sd.projectors.front());
  Vector vM = range_vector(sd.projectors.back());
  opt.state = std::sqrt(opt.p_min) * vm + std::sqrt(opt.p_max) * vM;
  opt.state.normalize();
  return opt;
}

double ratio_at(const std::vector<double>& eigenvalues, const std::vector<double>& p) {
  if (eigenvalues.size() != p.size())
    throw DimensionMismatch("ratio_at: distribution and spectrum sizes differ");
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    m1 += p[i] * eigenvalues[i];
    m2 += p[i] * eigenvalues[i] * eigenvalues[i];
  }
  return m1 * m1 / m2;
}

namespace {

template <typename F>
void for_each_grid_point(std::size_t d, double step, F&& f) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  if (d == 2) {
    for (int i = 0; i <= n; ++i) {
      double p0 = static_cast<double>(i) / n;
      f(std::vector<double>{p0, 1.0 - p0});
    }
  } else if (d == 3) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        double p0 = static_cast<double>(i) / n;
        double p1 = static_cast<double>(j) / n;
        f(std::vector<double>{p0, p1, 1.0 - p0 - p1});
      }
  } else {
    throw Error("simplex grid search supports 2 or 3 levels only");
  }
}

}  // namespace

double grid_min_ratio(const std::vector<double>& eigenvalues, double step) {
  double best = 1.0;
  for_each_grid_point(eigenvalues.size(), step, [&](const std::vector<double>& p) {
    best = std::min(best, ratio_at(eigenvalues, p));
  });
  return best;
}

double grid_max_variance(const std::vector<double>& eigenvalues, double step) {
  double best = 0.0;
  for_each_grid_point(eigenvalues.size(), step, [&](const std::vector<double>& p) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m1 += p[i] * eigenvalues[i];
      m2 += p[i] * eigenvalues[i] * eigenvalues[i];
    }
    best = std::max(best, m2 - m1 * m1);
  });
  return best;
}

std::vector<double> variance_maximizer_check(const std::vector<double>& eigenvalues) {
  validate_spectrum(eigenvalues, "variance_maximizer_check");
  std::vector<double> p(eigenvalues.size(), 0.0);
  p.front() = 0.5;
  p.back() = 0.5;
  if (eigenvalues.size() <= 3) {
    double m1 = 0.5 * (eigenvalues.front() + eigenvalues.back());
    double m2 = 0.5 * (eigenvalues.front() * eigenvalues.front() +
                       eigenvalues.back() * eigenvalues.back());
    double var = m2 - m1 * m1;
    double grid = grid_max_variance(eigenvalues, 1e-3);
    if (var + 1e-9 < grid)
      throw Error("variance_maximizer_check: grid search found a larger variance");
  }
  return p;
}

WayReport verify_way_consistency(const MeasuringProcess& p, const Matrix& a,
                                 const ConservedPair& c, std::uint64_t seed) {
  const Tolerances& tol = p.tol();
  WayReport r;
  r.kind = c.kind;
  r.noise_sup = noise_basis_sup(p, a);
  r.disturbance_sup = disturbance_basis_sup(p, a);
  r.precise = r.noise_sup <= tol.validation;
  r.nondisturbing = r.disturbance_sup <= tol.validation;
  r.conservation_residual = conservation_residual(p, c);
  r.yanase_residual = check_yanase(p, c.l2);
  r.comm_a_l1 = commutator_norm(a, c.l1);
  Matrix al1 = operator_modulus(c.l1, tol);
  r.comm_a_absl1 = commutator_norm(a, al1);
  {
    SpectralDecomposition sd = spectral_decompose(c.l2, tol);
    double mn = std::abs(sd.eigenvalues.front());
    for (double ev : sd.eigenvalues) mn = std::min(mn, std::abs(ev));
    r.l2_min_abs_eig = mn;
  }

  const bool conserved = r.conservation_residual <= kGateConserved;
  const bool preciseg = r.noise_sup <= kGatePrecise;
  const bool yanase = r.yanase_residual <= kGateYanase;
  const bool invertible = r.l2_min_abs_eig >= kGateInvertible;

  auto violation = [&r](const std::string& what) { r.violations.push_back(what); };

  if (c.kind == LawKind::multiplicative) {
    if (conserved) {
      r.identity_residual = commutator_identity_residual(p, a, c.l1, c.l2);
      r.identity_residual_displayed =
          commutator_identity_residual_displayed(p, a, c.l1, c.l2);
      if (*r.identity_residual > kIdentityThreshold)
        violation("commutator identity residual exceeds 1e-9 on a conserving model");
    }

    std::vector<Vector> psis;
    for (Eigen::Index i = 0; i < p.dim_h(); ++i) {
      Vector e = Vector::Zero(p.dim_h());
      e(i) = 1.0;
      psis.push_back(e);
    }
    Rng rng(seed);
    for (int i = 0; i < 20; ++i) psis.push_back(rng.haar_state(p.dim_h()));

    for (std::size_t i = 0; i < psis.size(); ++i) {
      BoundReport row;
      row.commutator_A_absL1 = r.comm_a_absl1;
      row.yanase_residual = r.yanase_residual;
      double eps = rms_noise(p, a, psis[i]);
      row.epsilon_sq = eps * eps;
      BoundPieces b = bound_pieces(c.l1, c.l2, psis[i], p.xi(), tol);
      if (b.kernel1() || b.kernel2()) {
        row.kernel = true;
        r.bound_rows.push_back(row);
        continue;
      }
      auto rc = ratio_and_cv(c.l2, p.xi(), tol);
      row.ratio_R = rc.first;
      row.cv = rc.second;
      if (conserved) {
        row.rhs_general = bound_general(p, a, c.l1, c.l2, psis[i]);
        if (row.epsilon_sq < row.rhs_general - kBoundSlack) {
          std::ostringstream os;
          os << "noise bound violated at psi#" << i << ": eps^2=" << row.epsilon_sq
             << " < rhs=" << row.rhs_general;
          violation(os.str());
        }
        HrCheck hr = hr_check(p, a, c.l1, c.l2, psis[i]);
        if (hr.lhs < hr.rhs - kBoundSlack) {
          std::ostringstream os;
          os << "Heisenberg-Robertson step violated at psi#" << i;
          violation(os.str());
        }
      }
      if (yanase) {
        row.rhs_yanase = bound_yanase(a, c.l1, c.l2, psis[i], p.xi(), tol);
        if (conserved && row.epsilon_sq < *row.rhs_yanase - kBoundSlack) {
          std::ostringstream os;
          os << "Yanase-form bound violated at psi#" << i;
          violation(os.str());
        }
      }
      r.bound_rows.push_back(row);
    }

    // Theorem gates: a precise, conserving process with invertible L₂ and
    // either nondisturbance or Yanase's condition forces [A,|L₁|] = 0.
    if (preciseg && conserved && invertible && r.disturbance_sup <= kGatePrecise &&
        r.comm_a_absl1 >= kGateCommutator)
      violation("precise+nondisturbing conserving process with invertible L2 "
                "but [A,|L1|] != 0");
    if (preciseg && conserved && invertible && yanase &&
        r.comm_a_absl1 >= kGateCommutator)
      violation("precise conserving process with Yanase condition and "
                "invertible L2 but [A,|L1|] != 0");
  } else {
    // Additive law: the classical conclusion applies to L₁ itself.
    if (preciseg && conserved && r.disturbance_sup <= kGatePrecise &&
        r.comm_a_l1 >= kGateCommutator)
      violation("precise+nondisturbing additively conserving process "
                "but [A,L1] != 0");
  }
  return r;
}

InvariantStateReport check_invariant_state(const MeasuringProcess& p,
                                           const Matrix& rho1, const Matrix& rho2,
                                           const Matrix& a) {
  const Tolerances& tol = p.tol();
  auto require_density = [&](const Matrix& rho, Eigen::Index dim, const char* who) {
    if (rho.rows() != dim || rho.cols() != dim)
      throw DimensionMismatch(std::string(who) + ": wrong dimension");
    if (!is_hermitian(rho, tol.validation))
      throw NotDensityOperator(std::string(who) + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol.validation ||
        std::abs(rho.trace().imag()) > tol.validation)
      throw NotDensityOperator(std::string(who) + ": trace must be 1");
    SpectralDecomposition sd = spectral_decompose(rho, tol);
    if (sd.eigenvalues.front() < -tol.validation)
      throw NotDensityOperator(std::string(who) + ": negative eigenvalue");
  };
  require_density(rho1, p.dim_h(), "check_invariant_state rho1");
  require_density(rho2, p.dim_k(), "check_invariant_state rho2");
  require_hermitian(a, tol.validation, "check_invariant_state observable");

  InvariantStateReport rep;
  Matrix prod = tensor(rho1, rho2);
  rep.invariance_residual = spectral_norm(p.u() * prod * p.u().adjoint() - prod);
  SpectralDecomposition sd2 = spectral_decompose(rho2, tol);
  rep.rho2_min_eigenvalue = sd2.eigenvalues.front();
  rep.commutator_a_rho1 = commutator_norm(a, rho1);
  return rep;
}

}  // namespace qmlim
