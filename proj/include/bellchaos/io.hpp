#pragma once

// JSON and CSV serialization of settings, matrices and experiment reports.
// JSON objects use sorted keys and carry "schema_version".

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellchaos/classical_bound.hpp"
#include "bellchaos/experiments.hpp"

namespace bellchaos {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const MeasurementParams& params);
/// Accepts {"theta0": [...], "theta1": [...]} or any object holding one under
/// "result", "best_settings" or "settings", so command reports can be fed
/// back in. Throws std::invalid_argument otherwise.
MeasurementParams params_from_json(const Json& j);

Json to_json(const IrrepLabel& label);
Json to_json(const LdsCounts& counts);
Json to_json(const EquivalenceReport& report);
Json to_json(const ClassicalMinimum& result);
Json to_json(const OptimizationResult& result);
Json to_json(const IrrepScanRow& row);
Json to_json(const RandomScanReport& report);
Json to_json(const VolumeReport& report);
/// Summary fields plus the normalized spacing histogram.
Json to_json(const SpectralReport& report, const std::vector<HistogramBin>& histogram);

/// Row-major dense matrix: {"rows", "cols", "data": [[re, im], ...]}.
Json matrix_to_json(const MatrixXcd& m);
MatrixXcd matrix_from_json(const Json& j);

/// Binary dump: magic "BCMX", uint64 rows, uint64 cols, then row-major
/// interleaved (re, im) doubles, all little-endian host order.
void write_matrix_binary(const std::string& path, const MatrixXcd& m);
MatrixXcd read_matrix_binary(const std::string& path);

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

/// r, violation, omega, p, q, p+2q, p-q (plus classification, converged).
void write_scan_csv(std::ostream& out, const std::vector<IrrepScanRow>& rows);
/// bin_left, bin_right, count, density over omega in [0, 1].
void write_omega_histogram_csv(std::ostream& out, const RandomScanReport& report);
/// n, volume_fraction, avg_radius (plus seed and counts).
void write_volume_csv(std::ostream& out, const std::vector<VolumeReport>& reports);
/// bin_left, bin_right, density, brody_fit_density.
void write_spectrum_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

}  // namespace bellchaos
