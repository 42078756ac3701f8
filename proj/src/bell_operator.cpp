#include "bellchaos/bell_operator.hpp"

#include <algorithm>
#include <stdexcept>

namespace bellchaos {

namespace {

constexpr std::array<int, kBasisSize> kAdjoint{kId,     kTMinus, kTPlus, kT3, kVMinus,
                                               kVPlus,  kUMinus, kUPlus, kU3};

const QutritOperator& pick(const ProjectorTriple& s0, const ProjectorTriple& s1,
                           const OneBodyTerm& t) {
  return (t.setting == 0 ? s0 : s1).p[static_cast<std::size_t>(t.outcome)];
}

}  // namespace

BellStructure bell_structure(const ProjectorTriple& setting0, const ProjectorTriple& setting1,
                             int n) {
  if (n < 1) throw std::invalid_argument("bell_structure: n must be at least 1");
  BellStructure s;
  for (const OneBodyTerm& t : kOneBodyTerms) {
    s.linear += lift_coefficients(pick(setting0, setting1, t), n);
  }
  for (const TwoBodyTerm& t : kTwoBodyTerms) {
    const QutritOperator& a = pick(setting0, setting1, t.first);
    const QutritOperator& b = pick(setting0, setting1, t.second);
    s.quadratic += t.coefficient * lift_coefficients(a, n) * lift_coefficients(b, n).transpose();
    s.linear -= t.coefficient * lift_coefficients(a * b, n);
  }
  return s;
}

BellStructure bell_structure(const MeasurementParams& params, int n) {
  const auto [s0, s1] = projectors_from_params(params);
  return bell_structure(s0, s1, n);
}

BellOperatorModel::BellOperatorModel(const IrrepLabel& label, int n)
    : label_(label), n_(n), basis_(cached_irrep_generators(label)) {
  if (n < 2) throw std::invalid_argument("BellOperatorModel: n must be at least 2");
  if (!diagram_for(label, n)) {
    throw std::invalid_argument("BellOperatorModel: irrep (" + std::to_string(label.p) + "," +
                                std::to_string(label.q) + ") does not occur for n = " +
                                std::to_string(n));
  }
  const Eigen::Index dim = dimension();
  diagonals_.resize(dim, kBasisSize * kBasisSize + kBasisSize);
  for (int k = 0; k < kBasisSize; ++k) {
    const SparseMatrixXcd& vk = basis_->ops[static_cast<std::size_t>(k)];
    diagonals_.col(kBasisSize * kBasisSize + k) = vk.diagonal();
    for (int l = 0; l < kBasisSize; ++l) {
      const SparseMatrixXcd prod = vk * basis_->ops[static_cast<std::size_t>(l)];
      diagonals_.col(kBasisSize * k + l) = prod.diagonal();
    }
  }
  if (dim <= kDenseThreshold) return;

  auto lower_of = [](const SparseMatrixXcd& m) { return SparseMatrixXcd(m.triangularView<Eigen::Lower>()); };
  std::vector<SparseMatrixXcd> parts;
  parts.reserve(kBasisSize * kBasisSize + kBasisSize);
  for (int k = 0; k < kBasisSize; ++k) {
    for (int l = 0; l < kBasisSize; ++l) {
      parts.push_back(lower_of(basis_->ops[static_cast<std::size_t>(k)] * basis_->ops[static_cast<std::size_t>(l)]));
    }
  }
  for (int k = 0; k < kBasisSize; ++k) parts.push_back(lower_of(basis_->ops[static_cast<std::size_t>(k)]));

  std::vector<Eigen::Triplet<cdouble>> cells;
  for (const SparseMatrixXcd& part : parts) {
    for (int j = 0; j < part.outerSize(); ++j) {
      for (SparseMatrixXcd::InnerIterator it(part, j); it; ++it) cells.emplace_back(it.row(), it.col(), 1.0);
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) cells.emplace_back(i, i, 1.0);
  pattern_.resize(dim, dim);
  pattern_.setFromTriplets(cells.begin(), cells.end());
  pattern_.makeCompressed();

  // Position of each stored entry of pattern_, column by column.
  terms_ = MatrixXcd::Zero(pattern_.nonZeros(), static_cast<Eigen::Index>(parts.size()));
  for (std::size_t t = 0; t < parts.size(); ++t) {
    for (int j = 0; j < pattern_.outerSize(); ++j) {
      const auto* rows = pattern_.innerIndexPtr();
      const auto begin = pattern_.outerIndexPtr()[j], end = pattern_.outerIndexPtr()[j + 1];
      for (SparseMatrixXcd::InnerIterator it(parts[t], j); it; ++it) {
        const auto at = std::lower_bound(rows + begin, rows + end, it.row()) - rows;
        terms_(at, static_cast<Eigen::Index>(t)) = it.value();
      }
    }
  }
}

void BellOperatorModel::apply(const BellStructure& s, const VectorXcd& x, VectorXcd& out) const {
  const Eigen::Index dim = dimension();
  MatrixXcd y(dim, kBasisSize);
  y.col(kId) = x;
  for (int l = 1; l < kBasisSize; ++l) y.col(l) = basis_->ops[static_cast<std::size_t>(l)] * x;
  MatrixXcd z = y * s.quadratic.transpose();
  for (int k = 0; k < kBasisSize; ++k) z.col(k) += s.linear(k) * x;
  out = z.col(kId);
  for (int k = 1; k < kBasisSize; ++k) out.noalias() += basis_->ops[static_cast<std::size_t>(k)] * z.col(k);
}

MatrixXcd BellOperatorModel::dense(const BellStructure& s) const {
  const Eigen::Index dim = dimension();
  check_dense_budget(static_cast<std::size_t>(dim), "Bell operator");
  SparseMatrixXcd total(dim, dim);
  for (int k = 0; k < kBasisSize; ++k) {
    SparseMatrixXcd inner(dim, dim);
    for (int l = 0; l < kBasisSize; ++l) {
      if (s.quadratic(k, l) != cdouble(0.0)) {
        inner += s.quadratic(k, l) * basis_->ops[static_cast<std::size_t>(l)];
      }
    }
    inner += s.linear(k) * basis_->ops[kId];
    total += basis_->ops[static_cast<std::size_t>(k)] * inner;
  }
  MatrixXcd out(total);
  return (out + out.adjoint()) / 2.0;
}

VectorXd BellOperatorModel::diagonal(const BellStructure& s) const {
  Eigen::Matrix<cdouble, kBasisSize * kBasisSize + kBasisSize, 1> weights;
  for (int k = 0; k < kBasisSize; ++k) {
    for (int l = 0; l < kBasisSize; ++l) weights(kBasisSize * k + l) = s.quadratic(k, l);
    weights(kBasisSize * kBasisSize + k) = s.linear(k);
  }
  return (diagonals_ * weights).real();
}

SparseMatrixXcd BellOperatorModel::sparse_lower(const BellStructure& s) const {
  if (dimension() <= kDenseThreshold) {
    const MatrixXcd full = dense(s);
    std::vector<Eigen::Triplet<cdouble>> cells;
    for (Eigen::Index j = 0; j < full.cols(); ++j) {
      for (Eigen::Index i = j; i < full.rows(); ++i) cells.emplace_back(i, j, i == j ? full(i, j).real() : full(i, j));
    }
    SparseMatrixXcd out(full.rows(), full.cols());
    out.setFromTriplets(cells.begin(), cells.end());
    return out;
  }
  Eigen::Matrix<cdouble, kBasisSize * kBasisSize + kBasisSize, 1> weights;
  for (int k = 0; k < kBasisSize; ++k) {
    for (int l = 0; l < kBasisSize; ++l) weights(kBasisSize * k + l) = s.quadratic(k, l);
    weights(kBasisSize * kBasisSize + k) = s.linear(k);
  }
  SparseMatrixXcd out = pattern_;
  Eigen::Map<VectorXcd>(out.valuePtr(), out.nonZeros()) = terms_ * weights;
  for (int j = 0; j < out.outerSize(); ++j) {
    for (SparseMatrixXcd::InnerIterator it(out, j); it; ++it) {
      if (it.row() == j) it.valueRef() = it.value().real();
    }
  }
  return out;
}

Eigenpairs BellOperatorModel::lowest(const BellStructure& s, int count,
                                     const MatrixXcd& warm) const {
  if (dimension() <= kDenseThreshold) return dense_lowest_eigenpairs(dense(s), count);
  ExtremalOptions options;
  options.max_iterations = kIterativeBudget;
  // Higher pairs only feed the degeneracy test of the gradient.
  options.secondary_tolerance = 1e-6;
  Eigenpairs pairs = shift_invert_lowest_eigenpairs(sparse_lower(s), count, warm, options);
  if (!pairs.converged) return dense_lowest_eigenpairs(dense(s), count);
  return pairs;
}

void BellOperatorModel::moments(const VectorXcd& v,
                                Eigen::Matrix<cdouble, kBasisSize, kBasisSize>& second,
                                LiftCoefficients& first) const {
  MatrixXcd y(dimension(), kBasisSize);
  y.col(kId) = v;
  for (int l = 1; l < kBasisSize; ++l) y.col(l) = basis_->ops[static_cast<std::size_t>(l)] * v;
  for (int k = 0; k < kBasisSize; ++k) {
    first(k) = v.dot(y.col(k));
    const auto adj_col = y.col(kAdjoint[static_cast<std::size_t>(k)]);
    for (int l = 0; l < kBasisSize; ++l) second(k, l) = adj_col.dot(y.col(l));
  }
}

BellOperator build_bell_operator(const ProjectorTriple& setting0, const ProjectorTriple& setting1,
                                 const IrrepLabel& label, int n) {
  const BellOperatorModel model(label, n);
  return {model.dense(bell_structure(setting0, setting1, n)), label, n, std::nullopt};
}

BellOperator build_bell_operator(const MeasurementParams& settings, const IrrepLabel& label,
                                 int n) {
  if (!settings.valid()) throw std::invalid_argument("build_bell_operator: invalid settings");
  const auto [s0, s1] = projectors_from_params(settings);
  BellOperator b = build_bell_operator(s0, s1, label, n);
  b.settings = settings;
  return b;
}

double quantum_violation(const BellOperator& b) {
  const VectorXd spectrum = hermitian_spectrum(b.matrix);
  if (spectrum.size() == 0) throw std::invalid_argument("quantum_violation: empty operator");
  return spectrum(0);
}

}  // namespace bellchaos
