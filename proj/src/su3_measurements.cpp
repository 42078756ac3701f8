#include "bellchaos/su3_measurements.hpp"

#include <stdexcept>

namespace bellchaos {

std::pair<QutritOperator, QutritOperator> heisenberg_weyl() {
  QutritOperator x = QutritOperator::Zero();
  QutritOperator z = QutritOperator::Zero();
  for (int a = 0; a < 3; ++a) {
    x((a + 1) % 3, a) = 1.0;
    z(a, a) = zeta(a);
  }
  return {x, z};
}

std::array<QutritOperator, 9> generator_unitaries() {
  const auto [x, z] = heisenberg_weyl();
  const QutritOperator x2 = x * x;
  const QutritOperator z2 = z * z;
  return {x, z, x2, x * z, z * x, x * z2, x2 * z, z2 * x, x2 * z2};
}

QutritOperator exp_i_hermitian(const QutritOperator& h) {
  Eigen::SelfAdjointEigenSolver<QutritOperator> es(h);
  const Eigen::Vector3cd phases =
      es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QutritOperator hermitian_log(const QutritOperator& unitary) {
  if (!approx_equal(unitary * unitary.adjoint(), QutritOperator::Identity(), 1e-9)) {
    throw std::invalid_argument("hermitian_log: input is not unitary");
  }
  // Real and imaginary Hermitian parts commute for a normal matrix; a generic
  // real combination of them has the eigenvectors of the unitary.
  const QutritOperator re = (unitary + unitary.adjoint()) / 2.0;
  const QutritOperator im = (unitary - unitary.adjoint()) / cdouble(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<QutritOperator> es(re + 0.7548776662466927 * im);
  const QutritOperator& vecs = es.eigenvectors();

  Eigen::Vector3d phases;
  for (int k = 0; k < 3; ++k) {
    const cdouble lambda = vecs.col(k).dot(unitary * vecs.col(k));
    const double phase = std::arg(lambda);
    if (std::abs(std::abs(phase) - std::numbers::pi) < 1e-6) {
      throw NumericalError("hermitian_log: eigenphase on the branch cut at -1");
    }
    phases(k) = phase;
  }
  QutritOperator g = vecs * phases.cast<cdouble>().asDiagonal() * vecs.adjoint();
  g = (g + g.adjoint()) / 2.0;
  if (!approx_equal(exp_i_hermitian(g), unitary, kQutritTolerance)) {
    throw NumericalError("hermitian_log: ill-conditioned eigenbasis");
  }
  return g;
}

GeneratorSet make_generator_set() {
  GeneratorSet set;
  const auto unitaries = generator_unitaries();
  for (std::size_t l = 0; l < unitaries.size(); ++l) set.generators[l] = hermitian_log(unitaries[l]);
  set.base_index = 0;
  return set;
}

const GeneratorSet& generator_set() {
  static const GeneratorSet set = make_generator_set();
  return set;
}

Eigen::VectorXd MeasurementParams::packed() const {
  Eigen::VectorXd out(2 * kThetaLength);
  out << theta0, theta1;
  return out;
}

MeasurementParams MeasurementParams::unpack(const Eigen::VectorXd& packed) {
  if (packed.size() != 2 * kThetaLength) {
    throw std::invalid_argument("MeasurementParams::unpack: wrong length");
  }
  MeasurementParams params;
  params.theta0 = packed.head(kThetaLength);
  params.theta1 = packed.tail(kThetaLength);
  return params;
}

QutritOperator generator_combination(const Eigen::VectorXd& theta, const GeneratorSet& gens) {
  if (theta.size() != kThetaLength) {
    throw std::invalid_argument("generator_combination: theta must have length " +
                                std::to_string(kThetaLength));
  }
  QutritOperator g = gens.base();
  std::size_t l = 0;
  for (std::size_t k = 0; k < gens.generators.size() && l < static_cast<std::size_t>(kThetaLength);
       ++k) {
    if (k == gens.base_index) continue;
    g += theta(static_cast<Eigen::Index>(l)) * (gens.generators[k] - gens.base());
    ++l;
  }
  return g;
}

QutritOperator unitary_from_params(const Eigen::VectorXd& theta, const GeneratorSet& gens) {
  const QutritOperator w = exp_i_hermitian(generator_combination(theta, gens));
  const Eigen::Vector3cd d(zeta(0), zeta(1), zeta(2));
  return w * d.asDiagonal() * w.adjoint();
}

ProjectorTriple projectors_from_unitary(const QutritOperator& unitary, int setting_index,
                                        double tol) {
  const QutritOperator id = QutritOperator::Identity();
  const QutritOperator u2 = unitary * unitary;
  const QutritOperator u3 = u2 * unitary;
  if (!approx_equal(unitary * unitary.adjoint(), id, tol) || !approx_equal(u3, id, tol)) {
    throw std::invalid_argument("projectors_from_unitary: spectrum is not the cube roots of unity");
  }
  ProjectorTriple triple;
  triple.setting_index = setting_index;
  for (int j = 0; j < 3; ++j) {
    QutritOperator p = (u3 + zeta(j) * u2 + zeta(2 * j) * unitary) / 3.0;
    p = (p + p.adjoint()) / 2.0;
    if (std::abs(p.trace() - 1.0) > tol) {
      throw std::invalid_argument(
          "projectors_from_unitary: eigenvalue multiplicities are not all one");
    }
    triple.p[static_cast<std::size_t>(j)] = p;
  }
  return triple;
}

ProjectorTriple projectors_from_basis(const QutritOperator& basis, int setting_index) {
  ProjectorTriple triple;
  triple.setting_index = setting_index;
  for (int j = 0; j < 3; ++j) {
    triple.p[static_cast<std::size_t>(j)] = basis.col(j) * basis.col(j).adjoint();
  }
  return triple;
}

std::pair<ProjectorTriple, ProjectorTriple> projectors_from_params(
    const MeasurementParams& params) {
  return {projectors_from_unitary(unitary_from_params(params.theta0), 0),
          projectors_from_unitary(unitary_from_params(params.theta1), 1)};
}

QutritOperator outcome_observable(const ProjectorTriple& triple) {
  return triple.p[1] + 2.0 * triple.p[2];
}

bool is_valid_projector_triple(const ProjectorTriple& triple, double tol) {
  const QutritOperator id = QutritOperator::Identity();
  QutritOperator sum = QutritOperator::Zero();
  for (std::size_t j = 0; j < 3; ++j) {
    const QutritOperator& p = triple.p[j];
    if (!approx_equal(p, p.adjoint(), tol)) return false;
    if (!approx_equal(p * p, p, tol)) return false;
    if (std::abs(p.trace() - 1.0) > tol) return false;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != j && !approx_equal(p * triple.p[k], QutritOperator::Zero(), tol)) return false;
    }
    sum += p;
  }
  return approx_equal(sum, id, tol);
}

}  // namespace bellchaos
