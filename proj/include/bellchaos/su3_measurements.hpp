#pragma once

// Single-qutrit measurement machinery: Heisenberg-Weyl operators, the
// generator set used to parametrize measurement bases, and extraction of
// outcome projectors from unitaries with spectrum {1, zeta, zeta^2}.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "bellchaos/common.hpp"

#ifndef BELLCHAOS_THETA_LENGTH
#define BELLCHAOS_THETA_LENGTH 8
#endif

namespace bellchaos {

using QutritOperator = Eigen::Matrix3cd;

/// Number of free parameters per measurement setting.
inline constexpr int kThetaLength = BELLCHAOS_THETA_LENGTH;
static_assert(kThetaLength >= 1 && kThetaLength <= 8,
              "the generator set has one base element and eight others");

/// Primitive cube root of unity exp(2 pi i / 3) raised to `power`.
template <typename Real = double>
std::complex<Real> zeta(int power = 1) {
  const Real angle = Real(2) * std::numbers::pi_v<Real> * Real(((power % 3) + 3) % 3) / Real(3);
  return std::polar(Real(1), angle);
}

template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  double tol = kQutritTolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Shift X|a> = |a+1 mod 3> and clock Z|a> = zeta^a |a>.
std::pair<QutritOperator, QutritOperator> heisenberg_weyl();

struct GeneratorSet {
  /// Hermitian principal logarithms of
  /// {X, Z, X^2, XZ, ZX, XZ^2, X^2Z, Z^2X, X^2Z^2}, in that order.
  std::array<QutritOperator, 9> generators;
  std::size_t base_index = 0;

  const QutritOperator& base() const { return generators[base_index]; }
};

/// The nine unitaries whose logarithms make up the generator set.
std::array<QutritOperator, 9> generator_unitaries();

/// Principal Hermitian logarithm g of a unitary V, i.e. V = exp(i g) with
/// eigenphases of g in (-pi, pi]. Throws NumericalError when an eigenphase
/// sits on the branch cut.
QutritOperator hermitian_log(const QutritOperator& unitary);

/// exp(i h) for Hermitian h via its eigendecomposition.
QutritOperator exp_i_hermitian(const QutritOperator& h);

/// Shared, lazily built generator set.
const GeneratorSet& generator_set();

/// Builds a fresh generator set (generator_set() caches this).
GeneratorSet make_generator_set();

struct MeasurementParams {
  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(kThetaLength);
  Eigen::VectorXd theta1 = Eigen::VectorXd::Zero(kThetaLength);

  /// Packs both settings into a single vector of length 2 * kThetaLength.
  Eigen::VectorXd packed() const;
  static MeasurementParams unpack(const Eigen::VectorXd& packed);
  bool valid() const { return theta0.size() == kThetaLength && theta1.size() == kThetaLength; }
};

/// g(theta) = g_0 + sum_l theta_l (g_l - g_0).
QutritOperator generator_combination(const Eigen::VectorXd& theta, const GeneratorSet& gens);

/// U(theta) = exp(i g(theta)) D exp(-i g(theta)) with D = diag(1, zeta, zeta^2).
QutritOperator unitary_from_params(const Eigen::VectorXd& theta,
                                   const GeneratorSet& gens = generator_set());

struct ProjectorTriple {
  std::array<QutritOperator, 3> p;
  int setting_index = 0;

  const QutritOperator& operator[](std::size_t j) const { return p[j]; }
};

/// P_j = (U^3 + zeta^j U^2 + zeta^{2j} U) / 3, the spectral projector of U
/// onto eigenvalue zeta^j. Rejects U whose spectrum is not {1, zeta, zeta^2}.
ProjectorTriple projectors_from_unitary(const QutritOperator& unitary, int setting_index = 0,
                                        double tol = 1e-8);

/// Projector triple whose outcome j projects onto column j of `basis`.
ProjectorTriple projectors_from_basis(const QutritOperator& basis, int setting_index = 0);

/// Both projector triples for a pair of parametrized settings.
std::pair<ProjectorTriple, ProjectorTriple> projectors_from_params(const MeasurementParams& params);

/// Outcome-weighted observable sum_j j P_j, spectrum {0, 1, 2}.
QutritOperator outcome_observable(const ProjectorTriple& triple);

/// True if the triple satisfies hermiticity, idempotence, rank one,
/// completeness and orthogonality to `tol`.
bool is_valid_projector_triple(const ProjectorTriple& triple, double tol = 1e-9);

}  // namespace bellchaos
