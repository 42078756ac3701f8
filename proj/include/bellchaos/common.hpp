#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bellchaos {

using cdouble = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;
using SparseMatrixXcd = SparseMatrix<cdouble>;

/// Absolute tolerance used for all qutrit-level identities.
inline constexpr double kQutritTolerance = 1e-10;

/// Raised when a dense matrix would exceed the configured memory budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine fails to converge or meets an
/// ill-conditioned input it cannot handle.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memory cap for dense matrices in megabytes. Reads BELLCHAOS_BUDGET_MB,
/// defaulting to 2048.
std::size_t matrix_budget_mb();

/// Throws BudgetExceeded if a dense complex dim x dim matrix does not fit.
void check_dense_budget(std::size_t dim, const std::string& what);

/// Deterministic child seed for stream `stream` of `master` (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace bellchaos
