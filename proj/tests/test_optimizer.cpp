#include <doctest.h>

#include <random>

#include "bellchaos/optimizer.hpp"

using namespace bellchaos;

TEST_CASE("gradient agrees with secant slopes") {
  const ViolationObjective objective({6, 0}, 6);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::normal_distribution<double> normal;
  int tested = 0;
  for (int trial = 0; tested < 10 && trial < 40; ++trial) {
    Eigen::VectorXd theta(2 * kThetaLength), direction(2 * kThetaLength);
    for (auto& v : theta) v = u(rng);
    for (auto& v : direction) v = normal(rng);
    direction.normalize();
    const auto at = objective.evaluate(theta);
    if (at.pairs.values(1) - at.pairs.values(0) < 1e-3) continue;  // near a crossing
    ++tested;
    const double h = 1e-5;
    const double secant =
        (objective.value(theta + h * direction) - objective.value(theta - h * direction)) / (2.0 * h);
    for (const GradientMode mode : {GradientMode::kCoefficientDifference, GradientMode::kObjectiveDifference}) {
      const double directional = objective.gradient(theta, at, mode).dot(direction);
      CHECK(std::abs(directional - secant) <= 1e-3 * std::max(std::abs(secant), 1e-3));
    }
  }
  CHECK(tested == 10);
}

TEST_CASE("restarts descend monotonically and report the best") {
  OptimizationConfig config;
  config.restarts = 4;
  config.max_iterations = 60;
  config.seed = 5;
  const auto result = optimize_measurements({8, 0}, 8, config);
  REQUIRE(result.restarts.size() == 4);
  CHECK(result.restarts_used == 4);
  for (const RestartSummary& r : result.restarts) {
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].second <= r.trace[i - 1].second + 1e-12);
    CHECK(result.best_value <= r.value);
    CHECK(r.iterations <= config.max_iterations);
  }
  CHECK(result.best_value == result.restarts[static_cast<std::size_t>(result.best_restart)].value);
  CHECK(result.seed == 5);
  const ViolationObjective objective({8, 0}, 8);
  CHECK(objective.value(result.best_settings.packed()) == doctest::Approx(result.best_value).epsilon(1e-9));
}

TEST_CASE("same seed, same result") {
  OptimizationConfig config;
  config.restarts = 3;
  config.max_iterations = 40;
  config.seed = 99;
  const auto a = optimize_measurements({4, 1}, 6, config);
  config.workers = 1;
  const auto b = optimize_measurements({4, 1}, 6, config);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_settings.packed() == b.best_settings.packed());
}

TEST_CASE("onset of violation in the symmetric irrep") {
  OptimizationConfig config;
  config.seed = 1;
  const auto seven = optimize_measurements({7, 0}, 7, config);
  CHECK(seven.best_value >= -1e-6);
  const auto eight = optimize_measurements({8, 0}, 8, config);
  CHECK(eight.best_value < -1e-7);
}

TEST_CASE("configuration checks") {
  OptimizationConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(optimize_measurements({2, 0}, 2, bad), std::invalid_argument);
  bad = {};
  bad.convergence_tolerance = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.finite_difference_epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
