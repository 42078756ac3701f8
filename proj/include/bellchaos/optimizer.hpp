#pragma once

// Minimization of lambda_min(B(theta)) over the two measurement settings,
// restricted to one irrep.

#include <cstdint>
#include <utility>
#include <vector>

#include "bellchaos/bell_operator.hpp"

namespace bellchaos {

enum class GradientMode {
  /// Hellmann-Feynman: <v| dB/dtheta |v> with dB/dtheta from central
  /// differences of the 9x9 operator coefficients. One eigensolve per gradient.
  kCoefficientDifference,
  /// Central differences of lambda_min itself (2 * 2M eigensolves).
  kObjectiveDifference,
};

struct OptimizationConfig {
  int restarts = 20;
  int max_iterations = 500;
  /// Initial trial step of the backtracking line search.
  double gradient_step = 1.0;
  double finite_difference_epsilon = 1e-5;
  /// Stop when the gradient norm drops below this.
  double convergence_tolerance = 1e-6;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  GradientMode gradient_mode = GradientMode::kCoefficientDifference;
  /// Starting points are uniform in [-init_range, init_range]^(2M).
  double init_range = 1.0;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

struct RestartSummary {
  MeasurementParams settings;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Stopped because the value stopped improving (not converged).
  bool stalled = false;
  double gradient_norm = 0.0;
  std::vector<std::pair<int, double>> trace;
};

struct OptimizationResult {
  MeasurementParams best_settings;
  double best_value = 0.0;
  /// (iteration, value) along the best restart; non-increasing.
  std::vector<std::pair<int, double>> trace;
  int restarts_used = 0;
  int best_restart = 0;
  std::uint64_t seed = 0;
  std::vector<RestartSummary> restarts;
};

/// Objective and gradient evaluation for one (irrep, n) pair.
class ViolationObjective {
 public:
  ViolationObjective(const IrrepLabel& label, int n, double fd_epsilon = 1e-5);

  struct Evaluation {
    double value = 0.0;
    /// Lowest two eigenpairs (or one when the irrep has dimension 1).
    Eigenpairs pairs;
  };

  const BellOperatorModel& model() const { return model_; }

  Evaluation evaluate(const Eigen::VectorXd& packed, const MatrixXcd& warm = {}) const;
  /// Gradient at `packed` given its evaluation. Averages the two lowest
  /// branches when they are within 1e-8 of each other.
  Eigen::VectorXd gradient(const Eigen::VectorXd& packed, const Evaluation& at,
                           GradientMode mode = GradientMode::kCoefficientDifference) const;
  double value(const Eigen::VectorXd& packed) const { return evaluate(packed).value; }

 private:
  BellOperatorModel model_;
  double fd_epsilon_;
};

/// Quasi-Newton descent with backtracking line search from `restarts` random
/// starts; restarts run concurrently and are merged by minimum.
OptimizationResult optimize_measurements(const IrrepLabel& label, int n,
                                         const OptimizationConfig& config);

/// A single restart from a given starting point.
RestartSummary descend_from(const ViolationObjective& objective, const Eigen::VectorXd& start,
                            const OptimizationConfig& config);

}  // namespace bellchaos
