#pragma once

// Nearest-neighbour level spacing statistics: spectrum unfolding, the Brody
// distribution and its maximum-likelihood fit.

#include <cmath>
#include <string>
#include <vector>

#include "bellchaos/common.hpp"

namespace bellchaos {

/// Brody normalization A(omega) = Gamma((omega + 2)/(omega + 1))^(omega + 1).
template <typename Real>
Real brody_scale(Real omega) {
  return std::pow(std::tgamma((omega + Real(2)) / (omega + Real(1))), omega + Real(1));
}

/// P(s, omega) = A (omega + 1) s^omega exp(-A s^(omega + 1)); omega = 0 is
/// the Poisson law, omega = 1 the Wigner surmise.
template <typename Real>
Real brody_pdf(Real s, Real omega) {
  if (s < Real(0)) return Real(0);
  const Real a = brody_scale(omega);
  return a * (omega + Real(1)) * std::pow(s, omega) * std::exp(-a * std::pow(s, omega + Real(1)));
}

/// Cumulative distribution 1 - exp(-A s^(omega + 1)).
template <typename Real>
Real brody_cdf(Real s, Real omega) {
  if (s <= Real(0)) return Real(0);
  return Real(1) - std::exp(-brody_scale(omega) * std::pow(s, omega + Real(1)));
}

enum class SpectralClass { kIntegrable, kChaotic };

std::string to_string(SpectralClass c);

struct SpectralConfig {
  int poly_degree = 10;
  /// Trim this fraction of spacings from each spectrum edge.
  double edge_trim_fraction = 0.02;
  bool trim_edges = true;
  /// omega <= threshold classifies as integrable.
  double classification_threshold = 1e-3;
  int histogram_bins = 30;
  double histogram_max = 4.0;
};

/// Fewer levels than this yield a degraded-confidence flag.
inline constexpr std::size_t kMinimumLevels = 50;
/// Zero spacings are floored to this value inside the likelihood.
inline constexpr double kSpacingFloor = 1e-12;

struct UnfoldedSpectrum {
  std::vector<double> levels;  // non-decreasing
  bool degraded = false;
};

/// Sorts `eigenvalues`, fits a least-squares polynomial of `poly_degree` to
/// the counting staircase N(x_i) = i, and maps each level through it.
/// Throws std::invalid_argument when all levels coincide.
UnfoldedSpectrum unfold_spectrum(std::vector<double> eigenvalues, int poly_degree);

/// Nearest-neighbour spacings of unfolded levels, optionally edge-trimmed,
/// rescaled to unit mean.
std::vector<double> level_spacings(const std::vector<double>& unfolded, const SpectralConfig& config);

struct BrodyFit {
  double omega = 0.0;
  double log_likelihood = 0.0;
  std::size_t samples = 0;
  bool degraded = false;
};

double brody_log_likelihood(const std::vector<double>& spacings, double omega);

/// Maximum-likelihood omega in [0, 1] by golden-section search, compared
/// against both endpoints.
BrodyFit fit_brody(const std::vector<double>& spacings);

SpectralClass classify(double omega, double threshold = 1e-3);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double density = 0.0;
  double brody_density = 0.0;
};

/// Normalized spacing histogram over [0, histogram_max) with the fitted
/// Brody density at each bin centre.
std::vector<HistogramBin> spacing_histogram(const std::vector<double>& spacings, double omega,
                                            const SpectralConfig& config);

struct SpectralReport {
  std::vector<double> raw_spectrum;
  std::vector<double> unfolded;
  std::vector<double> spacings;
  double brody_omega = 0.0;
  double log_likelihood = 0.0;
  std::size_t sample_count = 0;
  SpectralClass classification = SpectralClass::kIntegrable;
  bool degraded_confidence = false;
};

/// Unfold, take spacings, fit and classify an already computed spectrum.
SpectralReport analyze_spectrum(std::vector<double> spectrum, const SpectralConfig& config);

struct BellOperator;

/// Full pipeline on a Bell operator: eigendecompose, unfold, fit, classify.
SpectralReport analyze_operator(const BellOperator& b, const SpectralConfig& config = {});

}  // namespace bellchaos
