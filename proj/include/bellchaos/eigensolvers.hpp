#pragma once

// Hermitian eigensolvers: full dense spectra and a matrix-free extremal
// solver for the few lowest eigenpairs of large operators.

#include <algorithm>
#include <random>
#include <vector>

#include "bellchaos/common.hpp"

namespace bellchaos {

/// Ascending eigenvalues of the Hermitian part of `m`.
VectorXd hermitian_spectrum(const MatrixXcd& m);

struct Eigenpairs {
  VectorXd values;     // ascending
  MatrixXcd vectors;   // columns match `values`
  bool converged = true;
  int iterations = 0;
};

/// Lowest `count` eigenpairs of a dense Hermitian matrix.
Eigenpairs dense_lowest_eigenpairs(const MatrixXcd& m, int count);

struct ExtremalOptions {
  int max_basis = 24;
  int max_iterations = 4000;
  /// Residual tolerance relative to max(1, largest Ritz magnitude).
  double tolerance = 1e-9;
  /// Shift-invert only: tolerance for the pairs after the lowest one.
  double secondary_tolerance = 1e-9;
  std::uint64_t seed = 12345;
  /// Extra Ritz pairs iterated alongside the requested ones; they keep
  /// convergence fast inside clusters of nearly degenerate eigenvalues.
  int guard = 2;
  /// Diagonal of the operator; when set, residuals are Jacobi-preconditioned
  /// before expansion (Davidson). Empty means plain residual expansion.
  VectorXd diagonal;
};

/// Lowest `count` eigenpairs of the sparse Hermitian matrix whose lower
/// triangle (with diagonal) is `lower`, by block inverse iteration with a
/// shift below the spectrum. A shift is accepted only when the Cholesky
/// factorization of lower - shift succeeds, which certifies it lies under
/// the lowest eigenvalue. `start` columns seed the block.
Eigenpairs shift_invert_lowest_eigenpairs(const SparseMatrixXcd& lower, int count, const MatrixXcd& start,
                                          const ExtremalOptions& options = {});

/// Lowest `count` eigenpairs of the Hermitian operator y = apply(x) of size
/// `dim`, by thick-restarted Rayleigh-Ritz on residual-expanded subspaces
/// (Davidson; without a diagonal preconditioner the subspaces match those of
/// Lanczos). `start` supplies up to `count + guard` initial vectors; missing
/// columns are filled with random vectors.
template <typename Apply>
Eigenpairs lowest_eigenpairs(Apply&& apply, Eigen::Index dim, int count, const MatrixXcd& start,
                             const ExtremalOptions& options = {}) {
  if (count < 1 || count > dim) throw std::invalid_argument("lowest_eigenpairs: bad count");
  const int block = static_cast<int>(std::min<Eigen::Index>(dim, count + std::max(0, options.guard)));
  const int max_basis =
      static_cast<int>(std::min<Eigen::Index>(dim, std::max(options.max_basis, 3 * block + 2)));
  const int keep = std::max(block + 1, max_basis / 3);

  MatrixXcd basis(dim, max_basis);
  MatrixXcd image(dim, max_basis);
  MatrixXcd projected = MatrixXcd::Zero(max_basis, max_basis);
  int size = 0;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  VectorXcd work(dim);

  auto random_vector = [&] {
    VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cdouble(normal(rng), normal(rng));
    return v;
  };
  // Orthonormalizes v against the current basis (two Gram-Schmidt passes) and
  // appends it. Returns false if v lies in the span.
  auto append = [&](VectorXcd v) {
    const double norm0 = v.norm();
    if (norm0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (size > 0) v -= basis.leftCols(size) * (basis.leftCols(size).adjoint() * v);
    }
    const double norm = v.norm();
    if (norm <= 1e-10 * norm0) return false;
    basis.col(size) = v / norm;
    apply(basis.col(size), work);
    image.col(size) = work;
    projected.col(size).head(size + 1) = basis.leftCols(size + 1).adjoint() * work;
    projected.row(size).head(size) = projected.col(size).head(size).adjoint();
    projected(size, size) = projected(size, size).real();
    ++size;
    return true;
  };

  for (int c = 0; c < block; ++c) {
    if (c < start.cols() && start.rows() == dim && append(start.col(c))) continue;
    while (!append(random_vector())) {
    }
  }

  Eigenpairs result;
  for (int iteration = 0;; ++iteration) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> small(projected.topLeftCorner(size, size));
    const VectorXd& theta = small.eigenvalues();
    const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());

    std::vector<VectorXcd> residuals;
    std::vector<double> shifts;
    bool done = true;
    for (int c = 0; c < std::min(block, size); ++c) {
      const VectorXcd y = small.eigenvectors().col(c);
      VectorXcd r = image.leftCols(size) * y - theta(c) * (basis.leftCols(size) * y);
      if (r.norm() > options.tolerance * scale) {
        done = done && c >= count;
        residuals.push_back(std::move(r));
        shifts.push_back(theta(c));
      }
    }
    if (done || iteration >= options.max_iterations || size == dim) {
      result.values = theta.head(count);
      result.vectors = basis.leftCols(size) * small.eigenvectors().leftCols(count);
      result.converged = done || size == dim;
      result.iterations = iteration;
      return result;
    }

    if (size + static_cast<int>(residuals.size()) > max_basis) {
      const int kept = std::min(keep, size);
      const MatrixXcd y = small.eigenvectors().leftCols(kept);
      MatrixXcd new_basis = basis.leftCols(size) * y;
      MatrixXcd new_image = image.leftCols(size) * y;
      basis.leftCols(kept) = new_basis;
      image.leftCols(kept) = new_image;
      projected.setZero();
      projected.topLeftCorner(kept, kept) = theta.head(kept).cast<cdouble>().asDiagonal();
      size = kept;
    }
    // One expansion vector per unconverged pair, so exactly degenerate
    // eigenvalues are resolved.
    bool grew = false;
    for (std::size_t k = 0; k < residuals.size(); ++k) {
      VectorXcd& residual = residuals[k];
      if (options.diagonal.size() == dim) {
        for (Eigen::Index i = 0; i < dim; ++i) {
          double denom = options.diagonal(i) - shifts[k];
          if (std::abs(denom) < 1e-8 * scale) denom = denom < 0.0 ? -1e-8 * scale : 1e-8 * scale;
          residual(i) /= denom;
        }
      }
      grew = append(residual) || grew;
    }
    if (!grew) {
      while (size < dim && !append(random_vector())) {
      }
    }
  }
}

}  // namespace bellchaos
