#pragma once

// SU(3) irreducible representations in the Gelfand-Tsetlin basis and the
// lifting of single-qutrit operators to collective operators of n qutrits
// restricted to one irrep.

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "bellchaos/common.hpp"
#include "bellchaos/su3_measurements.hpp"

namespace bellchaos {

struct IrrepLabel {
  int p = 0;
  int q = 0;

  std::size_t dimension() const;
  /// p / (p + q); empty for the trivial irrep.
  std::optional<double> symmetry_ratio() const;

  friend auto operator<=>(const IrrepLabel&, const IrrepLabel&) = default;
};

/// (1 + p)(1 + q)(2 + p + q) / 2. Throws std::invalid_argument for negative
/// labels or labels above 10^4.
std::size_t irrep_dimension(const IrrepLabel& label);

/// Three-row Young diagram lambda_1 >= lambda_2 >= lambda_3 >= 0.
struct YoungDiagram {
  int l1 = 0;
  int l2 = 0;
  int l3 = 0;

  int size() const { return l1 + l2 + l3; }
  IrrepLabel label() const { return {l1 - l2, l2 - l3}; }
};

/// All irreps in the n-fold tensor power of the fundamental, sorted by (p, q).
std::vector<IrrepLabel> enumerate_irreps(int n);

/// The diagram of size n carrying `label`; empty if (p + 2q) and n are
/// incompatible.
std::optional<YoungDiagram> diagram_for(const IrrepLabel& label, int n);

/// Number of times irrep `label` occurs in (C^3)^{tensor n} (the dimension of
/// the matching symmetric-group irrep). Zero if the label does not occur.
long long schur_weyl_multiplicity(const IrrepLabel& label, int n);

/// Index of each operator in IrrepBasis::ops.
enum BasisOp : int { kId = 0, kTPlus, kTMinus, kT3, kVPlus, kVMinus, kUPlus, kUMinus, kU3 };
inline constexpr int kBasisSize = 9;

/// Realization of {I, T+, T-, T3, V+, V-, U+, U-, U3} in irrep (p, q).
///
/// States are Gelfand-Tsetlin patterns with top row (p + q, q, 0), ordered
/// by descending (m12, m22, m11), so the highest-weight state comes first and
/// the (1,0) irrep reproduces the computational basis |0>, |1>, |2>.
/// Qutrit level a maps to the GT index a + 1: T+ = S_01, V+ = S_02,
/// U+ = S_12, T3 = (S_00 - S_11)/2 and U3 = (S_11 - S_22)/2.
struct IrrepBasis {
  IrrepLabel label;
  std::array<SparseMatrixXcd, kBasisSize> ops;
  /// GT patterns (m12, m22, m11) for each basis state.
  std::vector<std::array<int, 3>> patterns;

  std::size_t dimension() const { return patterns.size(); }
  MatrixXcd dense(int op) const { return MatrixXcd(ops[static_cast<std::size_t>(op)]); }

  /// gl(3) generator S_ab (a, b in {0,1,2}) with top row (p + q, q, 0).
  SparseMatrixXcd s(int a, int b) const;
  /// Hypercharge Y = (S_00 + S_11 - 2 S_22) / 3.
  SparseMatrixXcd hypercharge() const;
  /// Quadratic Casimir of su(3), normalized to (p^2 + q^2 + pq + 3p + 3q)/3.
  SparseMatrixXcd casimir() const;
};

double casimir_eigenvalue(const IrrepLabel& label);

/// Builds the irrep from closed-form GT matrix elements.
IrrepBasis irrep_generators(const IrrepLabel& label);

/// Memoized irrep_generators, safe under concurrent use.
std::shared_ptr<const IrrepBasis> cached_irrep_generators(const IrrepLabel& label);

using GramMatrix = Eigen::Matrix<cdouble, kBasisSize, kBasisSize>;
using LiftCoefficients = Eigen::Matrix<cdouble, kBasisSize, 1>;

/// G_ij = Tr(v_i^dagger v_j) over the basis of the fundamental irrep.
GramMatrix gram_matrix(const IrrepBasis& fundamental);

/// Coefficients x with A = sum_i x_i v_i^{(1,0)}; x_0 is then multiplied by
/// n so that sum_i x_i v_i^{(p,q)} is the collective operator sum_k A^{(k)}.
LiftCoefficients lift_coefficients(const QutritOperator& a, int n);

/// Expands lift coefficients against the irrep basis.
SparseMatrixXcd expand_lift(const LiftCoefficients& x, const IrrepBasis& basis);

struct CollectiveOperator {
  MatrixXcd matrix;
  IrrepLabel label;
  int n = 0;
};

/// sum_k A^{(k)} restricted to irrep `label`.
CollectiveOperator lift_one_body(const QutritOperator& a, const IrrepLabel& label, int n);

/// sum_{k != l} A^{(k)} B^{(l)} = lift(A) lift(B) - lift(AB) restricted to `label`.
CollectiveOperator lift_two_body(const QutritOperator& a, const QutritOperator& b,
                                 const IrrepLabel& label, int n);

}  // namespace bellchaos
