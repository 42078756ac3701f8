#pragma once

// Command implementations behind the bellchaos executable. Each returns the
// JSON report it prints, so runs can be compared in-process.

#include <cstdint>
#include <optional>
#include <string>

#include "bellchaos/io.hpp"

namespace bellchaos::cli {

struct CommandResult {
  Json report;
  int exit_code = 0;
};

struct VerifyClassicalOptions {
  int n = 1;
  SearchMode mode = SearchMode::kExhaustive;
  std::uint64_t seed = 0;
  std::int64_t samples = 1'000'000;
  /// Random grids for the table/polynomial check when exhaustive checking is
  /// too large.
  std::int64_t equivalence_trials = 10'000;
  unsigned workers = 0;
};
CommandResult verify_classical(const VerifyClassicalOptions& o);

struct OptimizeOptions {
  int n = 0;
  IrrepLabel label;
  OptimizationConfig config;
  std::string out;  // optional JSON copy of the report
};
CommandResult optimize(const OptimizeOptions& o);

struct ScanOptions {
  int n = 0;
  OptimizationConfig config;
  SpectralConfig spectral;
  std::string out;  // CSV
};
CommandResult scan(const ScanOptions& o);

struct RandomScanOptions {
  int n = 0;
  IrrepLabel label;
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  SpectralConfig spectral;
  std::string out;  // CSV
};
CommandResult random_scan(const RandomScanOptions& o);

struct VolumeOptions {
  int n = 0;
  IrrepLabel label;
  VolumeConfig config;
  std::string settings;  // optional settings JSON; optimized otherwise
  std::string out;       // CSV
};
CommandResult volume(const VolumeOptions& o);

struct SpectrumOptions {
  int n = 0;
  IrrepLabel label;
  std::string settings;  // optional settings JSON; optimized otherwise
  OptimizationConfig config;
  SpectralConfig spectral;
  std::string out;  // CSV
};
CommandResult spectrum(const SpectrumOptions& o);

struct BuildBellOptions {
  int n = 0;
  IrrepLabel label;
  std::string settings;  // required settings JSON
  std::string out;       // .bin for the binary dump, JSON otherwise
};
CommandResult build_bell(const BuildBellOptions& o);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace bellchaos::cli
