#pragma once

// The permutationally invariant two-setting three-outcome Bell operator
//
//   B = P(0|0) + P(0|1) + P(1|0) + P(1|1)
//     + P(00|00) + P(00|11) + P(11|00) + P(11|11) - 2 (P(01|01) + P(01|10))
//
// restricted to one SU(3) irrep. One-body terms P(a|x) are collective
// projectors sum_k P_{a|x}^{(k)}; two-body terms are sum_{k != l}.

#include <array>
#include <optional>

#include "bellchaos/common.hpp"
#include "bellchaos/eigensolvers.hpp"
#include "bellchaos/su3_irreps.hpp"
#include "bellchaos/su3_measurements.hpp"

namespace bellchaos {

/// Violation threshold: lambda_min below this certifies nonlocality.
inline constexpr double kViolationThreshold = -1e-7;

struct OneBodyTerm {
  int outcome;
  int setting;
};

struct TwoBodyTerm {
  double coefficient;
  OneBodyTerm first;
  OneBodyTerm second;
};

/// The four one-body terms of the inequality (all with coefficient +1).
inline constexpr std::array<OneBodyTerm, 4> kOneBodyTerms{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

/// The six two-body terms of the inequality.
inline constexpr std::array<TwoBodyTerm, 6> kTwoBodyTerms{{
    {1.0, {0, 0}, {0, 0}},
    {1.0, {0, 1}, {0, 1}},
    {1.0, {1, 0}, {1, 0}},
    {1.0, {1, 1}, {1, 1}},
    {-2.0, {0, 0}, {1, 1}},
    {-2.0, {0, 1}, {1, 0}},
}};

/// The Bell operator as a polynomial in the irrep basis operators:
/// B = sum_kl quadratic(k, l) V_k V_l + sum_k linear(k) V_k.
struct BellStructure {
  Eigen::Matrix<cdouble, kBasisSize, kBasisSize> quadratic =
      Eigen::Matrix<cdouble, kBasisSize, kBasisSize>::Zero();
  LiftCoefficients linear = LiftCoefficients::Zero();
};

BellStructure bell_structure(const ProjectorTriple& setting0, const ProjectorTriple& setting1,
                             int n);
BellStructure bell_structure(const MeasurementParams& params, int n);

struct BellOperator {
  MatrixXcd matrix;
  IrrepLabel label;
  int n = 0;
  /// Present when the operator was built from parametrized settings.
  std::optional<MeasurementParams> settings;
};

/// Fast evaluation of the Bell operator inside one irrep without forming
/// dense products of generators.
class BellOperatorModel {
 public:
  BellOperatorModel(const IrrepLabel& label, int n);

  const IrrepLabel& label() const { return label_; }
  int parties() const { return n_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_->dimension()); }
  const IrrepBasis& basis() const { return *basis_; }

  /// out = B x.
  void apply(const BellStructure& s, const VectorXcd& x, VectorXcd& out) const;
  MatrixXcd dense(const BellStructure& s) const;
  /// Lower triangle (with diagonal) of B as a sparse matrix.
  SparseMatrixXcd sparse_lower(const BellStructure& s) const;
  /// Real diagonal of B in the Gelfand-Tsetlin basis.
  VectorXd diagonal(const BellStructure& s) const;

  /// Lowest `count` eigenpairs, dense for small irreps and by sparse
  /// shift-invert otherwise. `warm` columns seed the iterative solver.
  Eigenpairs lowest(const BellStructure& s, int count, const MatrixXcd& warm = {}) const;

  /// Moments of the basis in state v: second(k, l) = <v| V_k V_l |v>,
  /// first(k) = <v| V_k |v>. Then <v|B|v> = sum quadratic * second + linear * first.
  void moments(const VectorXcd& v, Eigen::Matrix<cdouble, kBasisSize, kBasisSize>& second,
               LiftCoefficients& first) const;

  /// Dimensions up to this size use the dense eigensolver in lowest().
  static constexpr Eigen::Index kDenseThreshold = 96;
  /// Iterative solves that need more steps than this fall back to dense.
  static constexpr int kIterativeBudget = 200;

 private:
  IrrepLabel label_;
  int n_;
  std::shared_ptr<const IrrepBasis> basis_;
  /// Column 9k + l holds diag(V_k V_l); column 81 + k holds diag(V_k).
  MatrixXcd diagonals_;
  /// Structure shared by every lower(V_k V_l) and lower(V_k); values unused.
  SparseMatrixXcd pattern_;
  /// Column 9k + l holds lower(V_k V_l) on pattern_; column 81 + k lower(V_k).
  MatrixXcd terms_;
};

BellOperator build_bell_operator(const MeasurementParams& settings, const IrrepLabel& label, int n);
BellOperator build_bell_operator(const ProjectorTriple& setting0, const ProjectorTriple& setting1,
                                 const IrrepLabel& label, int n);

/// Minimum eigenvalue of B from its full sorted spectrum.
double quantum_violation(const BellOperator& b);

}  // namespace bellchaos
