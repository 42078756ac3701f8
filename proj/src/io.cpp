#include "bellchaos/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bellchaos {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

/// Non-finite doubles become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

/// Shortest representation that parses back to the same double.
std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

}  // namespace

Json to_json(const MeasurementParams& params) {
  return {{"theta0", vector_json(params.theta0)}, {"theta1", vector_json(params.theta1)}};
}

MeasurementParams params_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("settings JSON must be an object");
  if (!j.contains("theta0")) {
    for (const char* key : {"result", "best_settings", "settings"}) {
      if (j.contains(key) && j.at(key).is_object()) return params_from_json(j.at(key));
    }
    throw std::invalid_argument("settings JSON lacks theta0/theta1");
  }
  if (!j.contains("theta1")) throw std::invalid_argument("settings JSON lacks theta1");
  MeasurementParams p;
  p.theta0 = vector_from_json(j.at("theta0"), "theta0");
  p.theta1 = vector_from_json(j.at("theta1"), "theta1");
  if (!p.valid()) {
    throw std::invalid_argument("settings need " + std::to_string(kThetaLength) +
                                " parameters per setting");
  }
  return p;
}

Json to_json(const IrrepLabel& label) { return {{"p", label.p}, {"q", label.q}}; }

Json to_json(const LdsCounts& counts) {
  Json out = Json::array();
  for (const auto& row : counts.c) out.push_back({row[0], row[1], row[2]});
  return out;
}

Json to_json(const EquivalenceReport& report) {
  Json mismatches = Json::array();
  for (const LdsCounts& c : report.mismatches) mismatches.push_back(to_json(c));
  return {{"n", report.n},
          {"checked", report.checked},
          {"exhaustive", report.exhaustive},
          {"all_equal", report.all_equal},
          {"mismatches", mismatches}};
}

Json to_json(const ClassicalMinimum& result) {
  return {{"n", result.n},
          {"mode", result.mode == SearchMode::kExhaustive ? "exhaustive" : "stochastic"},
          {"minimum", result.minimum},
          {"argmin", to_json(result.argmin)},
          {"states_visited", result.states_visited}};
}

Json to_json(const OptimizationResult& result) {
  Json trace = Json::array();
  for (const auto& [it, value] : result.trace) trace.push_back({it, value});
  Json restarts = Json::array();
  for (const RestartSummary& r : result.restarts) {
    restarts.push_back({{"value", number(r.value)},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"stalled", r.stalled},
                        {"gradient_norm", number(r.gradient_norm)}});
  }
  return {{"best_settings", to_json(result.best_settings)},
          {"best_value", number(result.best_value)},
          {"best_restart", result.best_restart},
          {"restarts_used", result.restarts_used},
          {"seed", result.seed},
          {"trace", trace},
          {"restarts", restarts}};
}

Json to_json(const IrrepScanRow& row) {
  Json out = {{"label", to_json(row.label)},
              {"dimension", row.label.dimension()},
              {"r", row.r ? Json(*row.r) : Json(nullptr)},
              {"violation", number(row.violation)},
              {"omega", row.omega ? number(*row.omega) : Json(nullptr)},
              {"classification", row.classification ? Json(to_string(*row.classification)) : Json(nullptr)},
              {"converged", row.converged},
              {"degraded_confidence", row.degraded_confidence},
              {"settings", to_json(row.settings)}};
  if (!row.error.empty()) out["error"] = row.error;
  return out;
}

Json to_json(const RandomScanReport& report) {
  Json omegas = Json::array(), violations = Json::array();
  for (double w : report.omegas) omegas.push_back(number(w));
  for (double v : report.violations) violations.push_back(number(v));
  return {{"n", report.n},
          {"label", to_json(report.label)},
          {"seed", report.seed},
          {"samples", report.samples},
          {"failures", report.failures},
          {"omega_histogram", report.omega_histogram},
          {"median_omega", number(report.median_omega)},
          {"violation_fraction", number(report.violation_fraction)},
          {"degraded_confidence", report.degraded_confidence},
          {"omegas", omegas},
          {"violations", violations}};
}

Json to_json(const VolumeReport& report) {
  Json radii = Json::array();
  for (double r : report.radii) radii.push_back(number(r));
  return {{"n", report.n},
          {"label", to_json(report.label)},
          {"seed", report.seed},
          {"avg_radius", number(report.avg_radius)},
          {"boundary_points", report.boundary_points},
          {"excluded_directions", report.excluded_directions},
          {"mc_samples", report.mc_samples},
          {"volume_fraction", number(report.volume_fraction)},
          {"optimal_violation", number(report.optimal_violation)},
          {"optimal_omega", number(report.optimal_omega)},
          {"optimal_settings", to_json(report.optimal_settings)},
          {"radii", radii},
          {"boundary_steps", report.boundary_steps}};
}

Json to_json(const SpectralReport& report, const std::vector<HistogramBin>& histogram) {
  Json bins = Json::array();
  for (const HistogramBin& b : histogram) {
    bins.push_back({{"bin_left", b.left},
                    {"bin_right", b.right},
                    {"density", number(b.density)},
                    {"brody_fit_density", number(b.brody_density)}});
  }
  return {{"levels", report.raw_spectrum.size()},
          {"lambda_min", report.raw_spectrum.empty() ? Json(nullptr) : number(report.raw_spectrum.front())},
          {"brody_omega", number(report.brody_omega)},
          {"log_likelihood", number(report.log_likelihood)},
          {"spacings", report.sample_count},
          {"classification", to_string(report.classification)},
          {"degraded_confidence", report.degraded_confidence},
          {"histogram", bins}};
}

Json matrix_to_json(const MatrixXcd& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

MatrixXcd matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("matrix JSON: shape does not match data");
  }
  MatrixXcd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c, ++k) m(i, c) = cdouble(data[k].at(0).get<double>(), data[k].at(1).get<double>());
  return m;
}

void write_matrix_binary(const std::string& path, const MatrixXcd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write("BCMX", 4);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

MatrixXcd read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, "BCMX", 4) != 0) throw std::invalid_argument(path + ": not a matrix dump");
  if (rows > (1u << 20) || cols > (1u << 20)) throw std::invalid_argument(path + ": implausible shape");
  MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof re);
      in.read(reinterpret_cast<char*>(&im), sizeof im);
      m(i, j) = cdouble(re, im);
    }
  }
  if (!in) throw std::invalid_argument(path + ": truncated matrix dump");
  return m;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

void write_scan_csv(std::ostream& out, const std::vector<IrrepScanRow>& rows) {
  out << "r,violation,omega,p,q,p+2q,p-q,classification,converged\n";
  for (const IrrepScanRow& row : rows) {
    const int p = row.label.p, q = row.label.q;
    out << csv_optional(row.r) << ',' << csv_number(row.violation) << ',' << csv_optional(row.omega)
        << ',' << p << ',' << q << ',' << p + 2 * q << ',' << p - q << ','
        << (row.classification ? to_string(*row.classification) : "") << ','
        << (row.converged ? 1 : 0) << '\n';
  }
}

void write_omega_histogram_csv(std::ostream& out, const RandomScanReport& report) {
  out << "bin_left,bin_right,count,density\n";
  const auto bins = report.omega_histogram.size();
  const double width = 1.0 / static_cast<double>(bins);
  const double total = static_cast<double>(std::max<std::size_t>(report.omegas.size(), 1));
  for (std::size_t k = 0; k < bins; ++k) {
    out << csv_number(width * static_cast<double>(k)) << ',' << csv_number(width * static_cast<double>(k + 1))
        << ',' << report.omega_histogram[k] << ','
        << csv_number(static_cast<double>(report.omega_histogram[k]) / (total * width)) << '\n';
  }
}

void write_volume_csv(std::ostream& out, const std::vector<VolumeReport>& reports) {
  out << "n,volume_fraction,avg_radius,p,q,seed,boundary_points,excluded_directions,mc_samples\n";
  for (const VolumeReport& r : reports) {
    out << r.n << ',' << csv_number(r.volume_fraction) << ',' << csv_number(r.avg_radius) << ','
        << r.label.p << ',' << r.label.q << ',' << r.seed << ',' << r.boundary_points << ','
        << r.excluded_directions << ',' << r.mc_samples << '\n';
  }
}

void write_spectrum_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_left,bin_right,density,brody_fit_density\n";
  for (const HistogramBin& b : bins) {
    out << csv_number(b.left) << ',' << csv_number(b.right) << ',' << csv_number(b.density) << ','
        << csv_number(b.brody_density) << '\n';
  }
}

}  // namespace bellchaos
