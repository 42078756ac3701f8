#pragma once

// Drivers for the three numerical studies: the optimized irrep scan, spectral
// statistics under random measurements, and the volume of the Poissonian
// region around the optimal settings.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bellchaos/optimizer.hpp"
#include "bellchaos/spectral_stats.hpp"

namespace bellchaos {

struct IrrepScanRow {
  IrrepLabel label;
  std::optional<double> r;  // empty for (0, 0)
  double violation = 0.0;
  std::optional<double> omega;
  std::optional<SpectralClass> classification;
  bool converged = false;
  bool degraded_confidence = false;
  MeasurementParams settings;
  /// Non-empty when the irrep could not be fully processed.
  std::string error;
};

/// Optimizes and analyzes every irrep of n parties. Rows are sorted by r
/// (trivial irrep first), ties by label. Each irrep uses its own seed stream
/// derived from opt_config.seed and its label.
std::vector<IrrepScanRow> scan_irreps(int n, const OptimizationConfig& opt_config,
                                      const SpectralConfig& spectral_config = {});

/// Haar-distributed unitary from QR of a complex Ginibre matrix, with the
/// phases of R's diagonal moved into Q.
template <typename Rng>
Eigen::Matrix3cd haar_unitary(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix3cd g;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) g(i, j) = cdouble(normal(rng), normal(rng));
  const Eigen::HouseholderQR<Eigen::Matrix3cd> qr(g);
  Eigen::Matrix3cd q = qr.householderQ();
  const Eigen::Matrix3cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < 3; ++j) {
    const cdouble d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cdouble(1.0);
  }
  return q;
}

/// Two independent Haar unitaries whose columns become the eigenbases of
/// settings 0 and 1.
std::pair<ProjectorTriple, ProjectorTriple> haar_random_settings(std::uint64_t seed);

struct RandomScanReport {
  int n = 0;
  IrrepLabel label;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::int64_t failures = 0;
  std::vector<double> omegas;      // per successful sample, in sample order
  std::vector<double> violations;  // lambda_min per successful sample
  /// Omega histogram over [0, 1]: counts per bin.
  std::vector<std::int64_t> omega_histogram;
  double median_omega = 0.0;
  double violation_fraction = 0.0;
  bool degraded_confidence = false;
};

inline constexpr int kOmegaHistogramBins = 20;

/// Spectral analysis of the Bell operator under `samples` Haar-random
/// settings (the same pair for every party). Requires samples >= 100.
RandomScanReport random_measurement_scan(int n, const IrrepLabel& label, std::int64_t samples,
                                         std::uint64_t seed,
                                         const SpectralConfig& spectral_config = {},
                                         unsigned workers = 0);

/// Frobenius norm of a - b. Throws std::invalid_argument on shape mismatch.
template <typename DerivedA, typename DerivedB>
double frobenius_radius(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_radius: shape mismatch");
  }
  return (a - b).norm();
}

/// Root-sum-square of the Frobenius distances of the two settings'
/// outcome observables.
double settings_radius(const std::pair<ProjectorTriple, ProjectorTriple>& a,
                       const std::pair<ProjectorTriple, ProjectorTriple>& b);

struct VolumeConfig {
  int directions = 100;
  std::int64_t mc_samples = 10000;
  /// Norm of each random perturbation direction in parameter space.
  double step_size = 0.02;
  /// omega must exceed this on two consecutive steps.
  double transition_threshold = 0.1;
  int step_cap = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  /// Optimizer used when no optimal settings are supplied.
  OptimizationConfig optimizer;
  SpectralConfig spectral;
};

struct VolumeReport {
  int n = 0;
  IrrepLabel label;
  std::uint64_t seed = 0;
  double avg_radius = 0.0;
  int boundary_points = 0;
  int excluded_directions = 0;
  std::int64_t mc_samples = 0;
  double volume_fraction = 0.0;
  double optimal_violation = 0.0;
  double optimal_omega = 0.0;
  MeasurementParams optimal_settings;
  std::vector<double> radii;       // R_j per boundary point, direction order
  std::vector<int> boundary_steps; // alpha per boundary point
};

/// Walks away from the optimal settings along random directions until the
/// level statistics turn non-Poissonian, averages the boundary radii and
/// estimates the Haar measure of the enclosed observable region.
VolumeReport poisson_region_volume(int n, const IrrepLabel& label, const VolumeConfig& config,
                                   std::optional<MeasurementParams> optimal = std::nullopt);

}  // namespace bellchaos
