#include "bellchaos/spectral_stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bellchaos/bell_operator.hpp"
#include "bellchaos/eigensolvers.hpp"

namespace bellchaos {

std::string to_string(SpectralClass c) {
  return c == SpectralClass::kIntegrable ? "Integrable" : "Chaotic";
}

UnfoldedSpectrum unfold_spectrum(std::vector<double> eigenvalues, int poly_degree) {
  if (eigenvalues.size() < 2) throw std::invalid_argument("unfold_spectrum: need two levels");
  if (poly_degree < 1) throw std::invalid_argument("unfold_spectrum: degree must be positive");
  std::sort(eigenvalues.begin(), eigenvalues.end());
  const double lo = eigenvalues.front();
  const double hi = eigenvalues.back();
  if (!(hi - lo > 1e-14 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))) {
    throw std::invalid_argument("unfold_spectrum: all levels coincide");
  }

  const auto count = static_cast<Eigen::Index>(eigenvalues.size());
  const int degree = static_cast<int>(std::min<Eigen::Index>(poly_degree, count - 1));
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);

  // Chebyshev basis on [-1, 1] keeps the least-squares problem well conditioned.
  Eigen::MatrixXd design(count, degree + 1);
  Eigen::VectorXd staircase(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = (eigenvalues[static_cast<std::size_t>(i)] - mid) / half;
    design(i, 0) = 1.0;
    if (degree >= 1) design(i, 1) = t;
    for (int k = 2; k <= degree; ++k) design(i, k) = 2.0 * t * design(i, k - 1) - design(i, k - 2);
    staircase(i) = static_cast<double>(i + 1);
  }
  const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(staircase);
  const Eigen::VectorXd fitted = design * coeffs;

  UnfoldedSpectrum out;
  out.degraded = eigenvalues.size() < kMinimumLevels;
  out.levels.resize(eigenvalues.size());
  for (Eigen::Index i = 0; i < count; ++i) {
    double y = fitted(i);
    if (i > 0) y = std::max(y, out.levels[static_cast<std::size_t>(i - 1)]);
    out.levels[static_cast<std::size_t>(i)] = y;
  }
  return out;
}

std::vector<double> level_spacings(const std::vector<double>& unfolded,
                                   const SpectralConfig& config) {
  if (unfolded.size() < 2) return {};
  std::vector<double> spacings(unfolded.size() - 1);
  for (std::size_t i = 1; i < unfolded.size(); ++i) spacings[i - 1] = unfolded[i] - unfolded[i - 1];
  if (config.trim_edges && config.edge_trim_fraction > 0.0) {
    const auto trim = static_cast<std::size_t>(config.edge_trim_fraction *
                                               static_cast<double>(spacings.size()));
    if (2 * trim < spacings.size()) {
      spacings = std::vector<double>(spacings.begin() + static_cast<std::ptrdiff_t>(trim),
                                     spacings.end() - static_cast<std::ptrdiff_t>(trim));
    }
  }
  const double mean =
      std::accumulate(spacings.begin(), spacings.end(), 0.0) / static_cast<double>(spacings.size());
  if (mean > 0.0) {
    for (double& s : spacings) s /= mean;
  }
  return spacings;
}

double brody_log_likelihood(const std::vector<double>& spacings, double omega) {
  const double a = brody_scale(omega);
  const double base = std::log(a) + std::log1p(omega);
  double total = 0.0;
  for (double s : spacings) {
    const double floored = std::max(s, kSpacingFloor);
    total += base + omega * std::log(floored) - a * std::pow(floored, omega + 1.0);
  }
  return total;
}

BrodyFit fit_brody(const std::vector<double>& spacings) {
  if (spacings.empty()) throw std::invalid_argument("fit_brody: no spacings");
  auto nll = [&](double w) { return -brody_log_likelihood(spacings, w); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = nll(c), fd = nll(d);
  while (b - a > 1e-9) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = nll(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = nll(d);
    }
  }
  double omega = 0.5 * (a + b);
  double best = nll(omega);
  for (double edge : {0.0, 1.0}) {
    const double f = nll(edge);
    if (f <= best) {
      best = f;
      omega = edge;
    }
  }
  return {omega, -best, spacings.size(), spacings.size() < kMinimumLevels};
}

SpectralClass classify(double omega, double threshold) {
  return omega <= threshold ? SpectralClass::kIntegrable : SpectralClass::kChaotic;
}

std::vector<HistogramBin> spacing_histogram(const std::vector<double>& spacings, double omega,
                                            const SpectralConfig& config) {
  if (config.histogram_bins < 1 || !(config.histogram_max > 0.0)) {
    throw std::invalid_argument("spacing_histogram: invalid binning");
  }
  const auto bins = static_cast<std::size_t>(config.histogram_bins);
  const double width = config.histogram_max / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double s : spacings) {
    if (s < 0.0 || s >= config.histogram_max) continue;
    counts[std::min(bins - 1, static_cast<std::size_t>(s / width))] += 1;
  }
  std::vector<HistogramBin> out(bins);
  const double total = static_cast<double>(std::max<std::size_t>(spacings.size(), 1));
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].left = width * static_cast<double>(k);
    out[k].right = width * static_cast<double>(k + 1);
    out[k].density = static_cast<double>(counts[k]) / (total * width);
    out[k].brody_density = brody_pdf(0.5 * (out[k].left + out[k].right), omega);
  }
  return out;
}

SpectralReport analyze_spectrum(std::vector<double> spectrum, const SpectralConfig& config) {
  if (spectrum.size() < 3) throw std::invalid_argument("analyze_spectrum: need at least 3 levels");
  std::sort(spectrum.begin(), spectrum.end());
  SpectralReport report;
  UnfoldedSpectrum unfolded = unfold_spectrum(spectrum, config.poly_degree);
  report.raw_spectrum = std::move(spectrum);
  report.unfolded = std::move(unfolded.levels);
  report.spacings = level_spacings(report.unfolded, config);
  const BrodyFit fit = fit_brody(report.spacings);
  report.brody_omega = fit.omega;
  report.log_likelihood = fit.log_likelihood;
  report.sample_count = fit.samples;
  report.classification = classify(fit.omega, config.classification_threshold);
  report.degraded_confidence = unfolded.degraded || fit.degraded;
  return report;
}

SpectralReport analyze_operator(const BellOperator& b, const SpectralConfig& config) {
  const VectorXd spectrum = hermitian_spectrum(b.matrix);
  return analyze_spectrum(std::vector<double>(spectrum.data(), spectrum.data() + spectrum.size()),
                          config);
}

}  // namespace bellchaos
