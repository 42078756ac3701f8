#include "bellchaos/optimizer.hpp"

#include <random>
#include <stdexcept>

#include "bellchaos/parallel.hpp"

namespace bellchaos {

namespace {

constexpr double kDegeneracyGap = 1e-8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
// A restart stops as stalled when kStallWindow iterations improve the value
// by less than kStallTolerance * max(1, |value|).
constexpr int kStallWindow = 10;
constexpr double kStallTolerance = 1e-10;

}  // namespace

void OptimizationConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(gradient_step > 0.0)) throw std::invalid_argument("gradient_step must be positive");
  if (!(finite_difference_epsilon > 0.0)) {
    throw std::invalid_argument("finite_difference_epsilon must be positive");
  }
  if (!(convergence_tolerance > 0.0) || !(convergence_tolerance < gradient_step)) {
    throw std::invalid_argument("convergence_tolerance must be positive and below gradient_step");
  }
  if (!(init_range > 0.0)) throw std::invalid_argument("init_range must be positive");
}

ViolationObjective::ViolationObjective(const IrrepLabel& label, int n, double fd_epsilon)
    : model_(label, n), fd_epsilon_(fd_epsilon) {}

ViolationObjective::Evaluation ViolationObjective::evaluate(const Eigen::VectorXd& packed,
                                                            const MatrixXcd& warm) const {
  const BellStructure s = bell_structure(MeasurementParams::unpack(packed), model_.parties());
  const int count = model_.dimension() >= 2 ? 2 : 1;
  Evaluation e;
  e.pairs = model_.lowest(s, count, warm);
  e.value = e.pairs.values(0);
  return e;
}

Eigen::VectorXd ViolationObjective::gradient(const Eigen::VectorXd& packed, const Evaluation& at,
                                             GradientMode mode) const {
  const Eigen::Index dim = packed.size();
  Eigen::VectorXd grad(dim);

  if (mode == GradientMode::kObjectiveDifference) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::VectorXd plus = packed, minus = packed;
      plus(j) += fd_epsilon_;
      minus(j) -= fd_epsilon_;
      grad(j) = (evaluate(plus, at.pairs.vectors).value - evaluate(minus, at.pairs.vectors).value) /
                (2.0 * fd_epsilon_);
    }
    return grad;
  }

  const bool degenerate =
      at.pairs.values.size() >= 2 && at.pairs.values(1) - at.pairs.values(0) < kDegeneracyGap;
  const int branches = degenerate ? 2 : 1;
  Eigen::Matrix<cdouble, kBasisSize, kBasisSize> second = decltype(second)::Zero();
  LiftCoefficients first = LiftCoefficients::Zero();
  for (int b = 0; b < branches; ++b) {
    Eigen::Matrix<cdouble, kBasisSize, kBasisSize> s2;
    LiftCoefficients s1;
    model_.moments(at.pairs.vectors.col(b), s2, s1);
    second += s2 / static_cast<double>(branches);
    first += s1 / static_cast<double>(branches);
  }

  const int n = model_.parties();
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::VectorXd plus = packed, minus = packed;
    plus(j) += fd_epsilon_;
    minus(j) -= fd_epsilon_;
    const BellStructure sp = bell_structure(MeasurementParams::unpack(plus), n);
    const BellStructure sm = bell_structure(MeasurementParams::unpack(minus), n);
    const cdouble d = (sp.quadratic - sm.quadratic).cwiseProduct(second).sum() +
                      (sp.linear - sm.linear).cwiseProduct(first).sum();
    grad(j) = d.real() / (2.0 * fd_epsilon_);
  }
  return grad;
}

RestartSummary descend_from(const ViolationObjective& objective, const Eigen::VectorXd& start,
                            const OptimizationConfig& config) {
  RestartSummary summary;
  const Eigen::Index dim = start.size();
  Eigen::VectorXd x = start;
  ViolationObjective::Evaluation current = objective.evaluate(x);
  summary.trace.emplace_back(0, current.value);

  // Quasi-Newton (BFGS) search directions with Armijo backtracking. The
  // landscape has flat directions from global rotations, where steepest
  // descent crawls.
  Eigen::MatrixXd inverse_hessian = Eigen::MatrixXd::Identity(dim, dim);
  bool scaled = false;
  Eigen::VectorXd g = objective.gradient(x, current, config.gradient_mode);
  int iteration = 0;
  for (; iteration < config.max_iterations; ++iteration) {
    const double gnorm = g.norm();
    summary.gradient_norm = gnorm;
    if (gnorm < config.convergence_tolerance) {
      summary.converged = true;
      break;
    }

    Eigen::VectorXd direction = -inverse_hessian * g;
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      inverse_hessian.setIdentity();
      scaled = false;
      direction = -g;
      slope = -gnorm * gnorm;
    }
    double step = scaled ? 1.0 : config.gradient_step;

    bool accepted = false;
    Eigen::VectorXd candidate;
    ViolationObjective::Evaluation trial;
    for (int k = 0; k < kMaxBacktracks; ++k, step *= 0.5) {
      candidate = x + step * direction;
      trial = objective.evaluate(candidate, current.pairs.vectors);
      if (trial.value <= current.value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (scaled) {
        // Retry once from a steepest-descent direction before giving up.
        inverse_hessian.setIdentity();
        scaled = false;
        --iteration;
        continue;
      }
      break;
    }

    const Eigen::VectorXd next_g = objective.gradient(candidate, trial, config.gradient_mode);
    const Eigen::VectorXd s = candidate - x;
    const Eigen::VectorXd y = next_g - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inverse_hessian *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = inverse_hessian * y;
      inverse_hessian += (rho * rho * y.dot(hy) + rho) * s * s.transpose() -
                         rho * (hy * s.transpose() + s * hy.transpose());
    }

    x = candidate;
    g = next_g;
    current = std::move(trial);
    summary.trace.emplace_back(iteration + 1, current.value);

    if (summary.trace.size() > kStallWindow) {
      const double before = summary.trace[summary.trace.size() - 1 - kStallWindow].second;
      if (before - current.value < kStallTolerance * std::max(1.0, std::abs(current.value))) {
        summary.stalled = true;
        ++iteration;
        break;
      }
    }
  }

  summary.iterations = iteration;
  summary.settings = MeasurementParams::unpack(x);
  summary.value = current.value;
  return summary;
}

OptimizationResult optimize_measurements(const IrrepLabel& label, int n,
                                         const OptimizationConfig& config) {
  config.validate();
  const ViolationObjective objective(label, n, config.finite_difference_epsilon);

  OptimizationResult result;
  result.seed = config.seed;
  result.restarts.resize(static_cast<std::size_t>(config.restarts));
  parallel_for(result.restarts.size(), config.workers, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(config.seed, r));
    std::uniform_real_distribution<double> uniform(-config.init_range, config.init_range);
    Eigen::VectorXd start(2 * kThetaLength);
    for (Eigen::Index i = 0; i < start.size(); ++i) start(i) = uniform(rng);
    result.restarts[r] = descend_from(objective, start, config);
  });

  result.restarts_used = config.restarts;
  for (std::size_t r = 0; r < result.restarts.size(); ++r) {
    if (r == 0 || result.restarts[r].value < result.best_value) {
      result.best_value = result.restarts[r].value;
      result.best_restart = static_cast<int>(r);
    }
  }
  const RestartSummary& best = result.restarts[static_cast<std::size_t>(result.best_restart)];
  result.best_settings = best.settings;
  result.trace = best.trace;
  return result;
}

}  // namespace bellchaos
