#include "bellchaos/eigensolvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <limits>
#include <vector>

namespace bellchaos {

namespace {

/// LU factorization with partial pivoting of a real tridiagonal matrix
/// (the LAPACK gttrf scheme), used for inverse iteration.
class TridiagonalLU {
 public:
  TridiagonalLU(const VectorXd& diag, const VectorXd& sub, double shift, double tiny)
      : d_(diag.array() - shift), dl_(sub), du_(sub), du2_(VectorXd::Zero(std::max<Eigen::Index>(0, diag.size() - 2))),
        pivot_(static_cast<std::size_t>(diag.size()), false) {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d_(i)) >= std::abs(dl_(i))) {
        if (d_(i) == 0.0) d_(i) = tiny;
        const double fact = dl_(i) / d_(i);
        dl_(i) = fact;
        d_(i + 1) -= fact * du_(i);
      } else {
        const double fact = d_(i) / dl_(i);
        d_(i) = dl_(i);
        dl_(i) = fact;
        const double temp = du_(i);
        du_(i) = d_(i + 1);
        d_(i + 1) = temp - fact * d_(i + 1);
        if (i + 2 < n) {
          du2_(i) = du_(i + 1);
          du_(i + 1) = -fact * du_(i + 1);
        }
        pivot_[static_cast<std::size_t>(i)] = true;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(d_(i)) < tiny) d_(i) = d_(i) < 0.0 ? -tiny : tiny;
    }
  }

  void solve(VectorXd& b) const {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!pivot_[static_cast<std::size_t>(i)]) {
        b(i + 1) -= dl_(i) * b(i);
      } else {
        const double temp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = temp - dl_(i) * b(i);
      }
    }
    b(n - 1) /= d_(n - 1);
    if (n > 1) b(n - 2) = (b(n - 2) - du_(n - 2) * b(n - 1)) / d_(n - 2);
    for (Eigen::Index i = n - 3; i >= 0; --i) {
      b(i) = (b(i) - du_(i) * b(i + 1) - du2_(i) * b(i + 2)) / d_(i);
    }
  }

 private:
  VectorXd d_, dl_, du_, du2_;
  std::vector<bool> pivot_;
};

}  // namespace

VectorXd hermitian_spectrum(const MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_spectrum: matrix not square");
  if (m.rows() == 0) return VectorXd();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_spectrum: eigensolver failed");
  return es.eigenvalues();
}

Eigenpairs dense_lowest_eigenpairs(const MatrixXcd& m, int count) {
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_lowest_eigenpairs: matrix not square");
  if (count < 1 || count > m.rows()) throw std::invalid_argument("dense_lowest_eigenpairs: count");
  const Eigen::Index dim = m.rows();
  if (dim <= 16 || 8 * count > dim) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("dense_lowest_eigenpairs: eigensolver failed");
    return {es.eigenvalues().head(count), es.eigenvectors().leftCols(count), true, 0};
  }

  // Tridiagonalize, take the eigenvalues of T, then recover the wanted
  // eigenvectors of T by inverse iteration and map them back through Q.
  const Eigen::Tridiagonalization<MatrixXcd> tri(m);
  const VectorXd diag = tri.diagonal();
  const VectorXd sub = tri.subDiagonal();
  const double norm = std::max({diag.cwiseAbs().maxCoeff(), sub.size() ? sub.cwiseAbs().maxCoeff() : 0.0,
                                std::numeric_limits<double>::min()});
  // The tridiagonal QR iteration needs unit-scale input (as in
  // SelfAdjointEigenSolver::compute); unscaled it can fail to converge.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag / norm, sub / norm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("dense_lowest_eigenpairs: eigensolver failed");
  const VectorXd values = norm * es.eigenvalues().head(count);

  const double tiny = std::numeric_limits<double>::epsilon() * norm;
  Eigen::MatrixXd y(dim, count);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int k = 0; k < count; ++k) {
    const TridiagonalLU lu(diag, sub, values(k), tiny);
    VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = uniform(rng);
    for (int sweep = 0; sweep < 4; ++sweep) {
      lu.solve(v);
      // Eigenvectors of nearby eigenvalues are found with the same shift
      // up to rounding; keep them orthogonal explicitly.
      for (int j = 0; j < k; ++j) v -= y.col(j).dot(v) * y.col(j);
      v.normalize();
    }
    y.col(k) = v;
  }

  Eigenpairs out;
  out.values = values;
  out.vectors = tri.matrixQ() * y.cast<cdouble>();
  return out;
}

Eigenpairs shift_invert_lowest_eigenpairs(const SparseMatrixXcd& lower, int count, const MatrixXcd& start,
                                          const ExtremalOptions& options) {
  const Eigen::Index dim = lower.rows();
  if (lower.cols() != dim) throw std::invalid_argument("shift_invert_lowest_eigenpairs: matrix not square");
  if (count < 1 || count > dim) throw std::invalid_argument("shift_invert_lowest_eigenpairs: bad count");
  const int block = static_cast<int>(std::min<Eigen::Index>(dim, count + std::max(0, options.guard)));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  MatrixXcd x(dim, block);
  for (int c = 0; c < block; ++c) {
    if (c < start.cols() && start.rows() == dim) {
      x.col(c) = start.col(c);
    } else {
      for (Eigen::Index i = 0; i < dim; ++i) x(i, c) = cdouble(normal(rng), normal(rng));
    }
  }
  auto orthonormalize = [&] {
    Eigen::HouseholderQR<MatrixXcd> qr(x);
    x = qr.householderQ() * MatrixXcd::Identity(dim, block);
  };
  orthonormalize();

  // Diagonal positions, for shifting without rebuilding the matrix.
  std::vector<cdouble*> diagonal(static_cast<std::size_t>(dim), nullptr);
  SparseMatrixXcd shifted = lower;
  shifted.makeCompressed();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (SparseMatrixXcd::InnerIterator it(shifted, j); it; ++it) {
      if (it.row() == j) diagonal[static_cast<std::size_t>(j)] = &it.valueRef();
    }
    if (!diagonal[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("shift_invert_lowest_eigenpairs: diagonal missing from pattern");
    }
  }
  std::vector<double> base(static_cast<std::size_t>(dim));
  for (std::size_t j = 0; j < base.size(); ++j) base[j] = diagonal[j]->real();

  Eigen::SimplicialLLT<SparseMatrixXcd, Eigen::Lower> llt;
  llt.analyzePattern(shifted);
  bool factored = false;
  double sigma = 0.0;
  double previous = std::numeric_limits<double>::infinity();

  Eigenpairs result;
  for (int iteration = 0;; ++iteration) {
    const MatrixXcd image = lower.selfadjointView<Eigen::Lower>() * x;
    const MatrixXcd projected = x.adjoint() * image;
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> small((projected + projected.adjoint()) / 2.0);
    const VectorXd& theta = small.eigenvalues();
    x = x * small.eigenvectors();
    const MatrixXcd residual = image * small.eigenvectors() - x * theta.cast<cdouble>().asDiagonal();
    const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
    const double lead = residual.col(0).norm();
    bool done = lead <= options.tolerance * scale;
    for (int c = 1; c < count; ++c) done = done && residual.col(c).norm() <= options.secondary_tolerance * scale;
    if (done || iteration >= options.max_iterations) {
      result.values = theta.head(count);
      result.vectors = x.leftCols(count);
      result.converged = done;
      result.iterations = iteration;
      return result;
    }

    // The lowest Ritz value lies within its residual of some eigenvalue;
    // aim just below that. A factorization costs dozens of solves, so the
    // shift moves only when convergence at the current one is slow.
    const double gap = std::max(2.0 * lead, 1e-8 * scale);
    const bool slow = lead > 0.5 * previous;
    previous = lead;
    if (!factored || (slow && gap < 0.5 * (theta(0) - sigma))) {
      double delta = gap;
      factored = false;
      for (int attempt = 0; attempt < 60 && !factored; ++attempt, delta *= 8.0) {
        sigma = theta(0) - delta;
        for (std::size_t j = 0; j < base.size(); ++j) *diagonal[j] = base[j] - sigma;
        llt.factorize(shifted);
        factored = llt.info() == Eigen::Success;
      }
      if (!factored) throw NumericalError("shift_invert_lowest_eigenpairs: no shift below the spectrum");
    }
    x = llt.solve(x);
    orthonormalize();
  }
}

}  // namespace bellchaos
