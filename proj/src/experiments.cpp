#include "bellchaos/experiments.hpp"

#include <algorithm>
#include <stdexcept>

#include "bellchaos/eigensolvers.hpp"
#include "bellchaos/parallel.hpp"

namespace bellchaos {

namespace {

constexpr int kMaxScanParties = 32;

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
}

std::uint64_t label_stream(const IrrepLabel& label) {
  return (static_cast<std::uint64_t>(label.p) << 32) | static_cast<std::uint64_t>(label.q);
}

}  // namespace

std::vector<IrrepScanRow> scan_irreps(int n, const OptimizationConfig& opt_config,
                                      const SpectralConfig& spectral_config) {
  if (n < 2 || n > kMaxScanParties) {
    throw std::invalid_argument("scan_irreps: n must be in [2, " + std::to_string(kMaxScanParties) + "]");
  }
  opt_config.validate();
  std::vector<IrrepScanRow> rows;
  for (const IrrepLabel& label : enumerate_irreps(n)) {
    IrrepScanRow row;
    row.label = label;
    row.r = label.symmetry_ratio();
    try {
      OptimizationConfig config = opt_config;
      config.seed = derive_seed(opt_config.seed, label_stream(label));
      const OptimizationResult opt = optimize_measurements(label, n, config);
      row.violation = opt.best_value;
      row.settings = opt.best_settings;
      row.converged = opt.restarts[static_cast<std::size_t>(opt.best_restart)].converged;
      if (label.dimension() < 3) {
        row.error = "too few levels for spacing statistics";
      } else {
        const SpectralReport report =
            analyze_operator(build_bell_operator(opt.best_settings, label, n), spectral_config);
        row.violation = report.raw_spectrum.front();
        row.omega = report.brody_omega;
        row.classification = report.classification;
        row.degraded_confidence = report.degraded_confidence;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const IrrepScanRow& a, const IrrepScanRow& b) {
    const double ra = a.r.value_or(-1.0), rb = b.r.value_or(-1.0);
    if (ra != rb) return ra < rb;
    return a.label < b.label;
  });
  return rows;
}

std::pair<ProjectorTriple, ProjectorTriple> haar_random_settings(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Matrix3cd u0 = haar_unitary(rng);
  const Eigen::Matrix3cd u1 = haar_unitary(rng);
  return {projectors_from_basis(u0, 0), projectors_from_basis(u1, 1)};
}

RandomScanReport random_measurement_scan(int n, const IrrepLabel& label, std::int64_t samples,
                                         std::uint64_t seed, const SpectralConfig& spectral_config,
                                         unsigned workers) {
  if (samples < 100) throw std::invalid_argument("random_measurement_scan: need at least 100 samples");
  // Validates the label/n pair and the dense budget before spawning work.
  const BellOperatorModel model(label, n);
  check_dense_budget(static_cast<std::size_t>(model.dimension()), "random_measurement_scan");

  struct Sample {
    bool ok = false;
    bool degraded = false;
    double omega = 0.0;
    double violation = 0.0;
  };
  std::vector<Sample> results(static_cast<std::size_t>(samples));
  parallel_for(results.size(), workers, [&](std::size_t i) {
    Sample& out = results[i];
    try {
      const auto [s0, s1] = haar_random_settings(derive_seed(seed, i));
      const MatrixXcd b = model.dense(bell_structure(s0, s1, n));
      const VectorXd spectrum = hermitian_spectrum(b);
      const SpectralReport report = analyze_spectrum(
          std::vector<double>(spectrum.data(), spectrum.data() + spectrum.size()), spectral_config);
      out.omega = report.brody_omega;
      out.violation = spectrum(0);
      out.degraded = report.degraded_confidence;
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;
    }
  });

  RandomScanReport report;
  report.n = n;
  report.label = label;
  report.seed = seed;
  report.samples = samples;
  report.omega_histogram.assign(kOmegaHistogramBins, 0);
  std::int64_t violating = 0;
  for (const Sample& s : results) {
    if (!s.ok) {
      ++report.failures;
      continue;
    }
    report.omegas.push_back(s.omega);
    report.violations.push_back(s.violation);
    report.degraded_confidence = report.degraded_confidence || s.degraded;
    if (s.violation < kViolationThreshold) ++violating;
    const auto bin = std::min<std::size_t>(kOmegaHistogramBins - 1,
                                           static_cast<std::size_t>(s.omega * kOmegaHistogramBins));
    ++report.omega_histogram[bin];
  }
  report.median_omega = median(report.omegas);
  if (!report.omegas.empty()) {
    report.violation_fraction =
        static_cast<double>(violating) / static_cast<double>(report.omegas.size());
  }
  return report;
}

double settings_radius(const std::pair<ProjectorTriple, ProjectorTriple>& a,
                       const std::pair<ProjectorTriple, ProjectorTriple>& b) {
  const double r0 = frobenius_radius(outcome_observable(a.first), outcome_observable(b.first));
  const double r1 = frobenius_radius(outcome_observable(a.second), outcome_observable(b.second));
  return std::hypot(r0, r1);
}

VolumeReport poisson_region_volume(int n, const IrrepLabel& label, const VolumeConfig& config,
                                   std::optional<MeasurementParams> optimal) {
  if (config.directions < 1) throw std::invalid_argument("poisson_region_volume: directions must be positive");
  if (config.mc_samples < 1) throw std::invalid_argument("poisson_region_volume: mc_samples must be positive");
  if (!(config.step_size >= 0.0)) throw std::invalid_argument("poisson_region_volume: negative step_size");
  if (config.step_cap < 1) throw std::invalid_argument("poisson_region_volume: step_cap must be positive");
  const BellOperatorModel model(label, n);
  if (model.dimension() < 3) throw std::invalid_argument("poisson_region_volume: irrep too small");

  VolumeReport report;
  report.n = n;
  report.label = label;
  report.seed = config.seed;
  report.mc_samples = config.mc_samples;

  if (!optimal) {
    OptimizationConfig opt = config.optimizer;
    opt.seed = derive_seed(config.seed, 0);
    opt.workers = config.workers;
    optimal = optimize_measurements(label, n, opt).best_settings;
  }
  if (!optimal->valid()) throw std::invalid_argument("poisson_region_volume: invalid optimal settings");
  report.optimal_settings = *optimal;
  const auto optimal_triples = projectors_from_params(*optimal);

  auto omega_at = [&](const Eigen::VectorXd& packed, double* lowest) {
    const MatrixXcd b = model.dense(bell_structure(MeasurementParams::unpack(packed), n));
    const VectorXd spectrum = hermitian_spectrum(b);
    if (lowest) *lowest = spectrum(0);
    return analyze_spectrum(std::vector<double>(spectrum.data(), spectrum.data() + spectrum.size()),
                            config.spectral)
        .brody_omega;
  };
  const Eigen::VectorXd origin = optimal->packed();
  report.optimal_omega = omega_at(origin, &report.optimal_violation);

  // Per direction: the step index of the boundary, or 0 when excluded.
  std::vector<int> steps(static_cast<std::size_t>(config.directions), 0);
  std::vector<double> radii(steps.size(), 0.0);
  const std::uint64_t direction_seed = derive_seed(config.seed, 1);
  parallel_for(steps.size(), config.workers, [&](std::size_t j) {
    if (config.step_size == 0.0) return;
    std::mt19937_64 rng(derive_seed(direction_seed, j));
    std::normal_distribution<double> normal;
    Eigen::VectorXd direction(origin.size());
    for (Eigen::Index i = 0; i < direction.size(); ++i) direction(i) = normal(rng);
    direction *= config.step_size / direction.norm();

    bool previous_above = false;
    for (int alpha = 1; alpha <= config.step_cap; ++alpha) {
      const bool above =
          omega_at(origin + alpha * direction, nullptr) > config.transition_threshold;
      if (above && previous_above) {
        // The boundary is the first of the two consecutive non-Poissonian steps.
        const int boundary = alpha - 1;
        const auto triples =
            projectors_from_params(MeasurementParams::unpack(origin + boundary * direction));
        steps[j] = boundary;
        radii[j] = settings_radius(triples, optimal_triples);
        return;
      }
      previous_above = above;
    }
  });

  double total = 0.0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (steps[j] == 0) {
      ++report.excluded_directions;
      continue;
    }
    report.boundary_steps.push_back(steps[j]);
    report.radii.push_back(radii[j]);
    total += radii[j];
  }
  report.boundary_points = static_cast<int>(report.radii.size());
  if (report.boundary_points == 0) return report;
  report.avg_radius = total / report.boundary_points;

  const std::uint64_t mc_seed = derive_seed(config.seed, 2);
  constexpr std::int64_t kChunk = 1024;
  const auto chunks = static_cast<std::size_t>((config.mc_samples + kChunk - 1) / kChunk);
  std::vector<std::int64_t> inside(chunks, 0);
  parallel_for(chunks, config.workers, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(config.mc_samples, begin + kChunk);
    for (std::int64_t i = begin; i < end; ++i) {
      const auto random = haar_random_settings(derive_seed(mc_seed, static_cast<std::uint64_t>(i)));
      if (settings_radius(random, optimal_triples) < report.avg_radius) ++inside[c];
    }
  });
  std::int64_t count = 0;
  for (std::int64_t v : inside) count += v;
  report.volume_fraction = static_cast<double>(count) / static_cast<double>(config.mc_samples);
  return report;
}

}  // namespace bellchaos
