// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [criterion ...]   e.g. `acceptance 1 2 3` or `acceptance 10-smoke`
//
// With no arguments every criterion runs, including the full volume batch.
// Artifacts (scan CSV, volume CSV, reports) go to $BELLCHAOS_ARTIFACTS or
// ./acceptance_artifacts.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bellchaos/io.hpp"
#include "support/oracles.hpp"

#ifndef BELLCHAOS_CLI_PATH
#define BELLCHAOS_CLI_PATH "bellchaos"
#endif

using namespace bellchaos;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

fs::path artifacts() {
  const char* env = std::getenv("BELLCHAOS_ARTIFACTS");
  fs::path dir = env ? fs::path(env) : fs::path("acceptance_artifacts");
  fs::create_directories(dir);
  return dir;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 1
Outcome classical_bound() {
  const auto start = Clock::now();
  std::string detail;
  bool pass = true;
  for (int n = 1; n <= 8; ++n) {
    const auto r = minimize_classical(n, {});
    pass = pass && r.minimum == 0 && r.states_visited == composition_count(n);
    if (r.minimum != 0) detail += "n=" + std::to_string(n) + " minimum " + std::to_string(r.minimum) + "; ";
  }
  ClassicalSearchConfig stochastic;
  stochastic.mode = SearchMode::kStochastic;
  stochastic.samples = 1'000'000;
  stochastic.seed = 2024;
  const auto r = minimize_classical(25, stochastic);
  pass = pass && r.minimum == 0;
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 300.0;
  detail += "exhaustive n=1..8 all 0; n=25 stochastic (1e6 starts + descent) minimum " + std::to_string(r.minimum) +
            " over " + std::to_string(r.states_visited) + " states; " + fmt(elapsed, 3) + " s (limit 300 s)";
  return {pass, detail};
}

// 2
Outcome polynomial_equivalence() {
  bool pass = true;
  std::int64_t checked = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto r = verify_polynomial_equivalence(n, 0, 0);
    pass = pass && r.all_equal && r.exhaustive && r.checked == composition_count(n);
    checked += r.checked;
  }
  const auto big = verify_polynomial_equivalence(25, 10'000, 25);
  pass = pass && big.all_equal && big.checked == 10'000;
  return {pass, std::to_string(checked) + " exhaustive grids (n<=3) and " + std::to_string(big.checked) +
                    " random grids (n=25), mismatches " + std::to_string(big.mismatches.size())};
}

// 3
Outcome irrep_dimensions() {
  bool pass = irrep_dimension({21, 2}) == 825 && irrep_dimension({9, 8}) == 855;
  std::string bad;
  for (int n = 1; n <= 12; ++n) {
    long long total = 0, expected = 1;
    for (int i = 0; i < n; ++i) expected *= 3;
    for (const IrrepLabel& label : enumerate_irreps(n)) {
      const long long mult = schur_weyl_multiplicity(label, n);
      if (mult != oracle::hook_length_multiplicity(*diagram_for(label, n))) bad += " mult(" + std::to_string(n) + ")";
      total += static_cast<long long>(label.dimension()) * mult;
    }
    if (total != expected) bad += " n=" + std::to_string(n);
  }
  pass = pass && bad.empty();
  return {pass, "(21,2)->" + std::to_string(irrep_dimension({21, 2})) + ", (9,8)->" +
                    std::to_string(irrep_dimension({9, 8})) + ", sum dim*mult = 3^n for n<=12" +
                    (bad.empty() ? "" : "; failures:" + bad)};
}

// 4
Outcome irrep_algebra() {
  const auto start = Clock::now();
  std::set<IrrepLabel> labels;
  for (int n = 1; n <= 25; ++n)
    for (const IrrepLabel& l : enumerate_irreps(n))
      if (l.dimension() <= 1000) labels.insert(l);
  double worst_comm = 0.0, worst_casimir = 0.0;
  for (const IrrepLabel& label : labels) {
    const IrrepBasis basis = irrep_generators(label);
    SparseMatrixXcd s[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s[a][b] = basis.s(a, b);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) {
            SparseMatrixXcd defect = s[a][b] * s[c][d] - s[c][d] * s[a][b];
            if (b == c) defect -= s[a][d];
            if (a == d) defect += s[c][b];
            for (int k = 0; k < defect.outerSize(); ++k)
              for (SparseMatrixXcd::InnerIterator it(defect, k); it; ++it)
                worst_comm = std::max(worst_comm, std::abs(it.value()));
          }
    SparseMatrixXcd identity(static_cast<Eigen::Index>(basis.dimension()), static_cast<Eigen::Index>(basis.dimension()));
    identity.setIdentity();
    const SparseMatrixXcd casimir = basis.casimir() - casimir_eigenvalue(label) * identity;
    for (int k = 0; k < casimir.outerSize(); ++k)
      for (SparseMatrixXcd::InnerIterator it(casimir, k); it; ++it)
        worst_casimir = std::max(worst_casimir, std::abs(it.value()));
  }
  const bool pass = worst_comm <= 1e-8 && worst_casimir <= 1e-8;
  return {pass, std::to_string(labels.size()) + " irreps (n<=25, dim<=1000); max commutator defect " +
                    fmt(worst_comm, 3) + ", max Casimir defect " + fmt(worst_casimir, 3) + " (tol 1e-8); " +
                    fmt(seconds_since(start), 3) + " s"};
}

// 5
Outcome block_decomposition() {
  double worst = 0.0;
  for (int n : {2, 3})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto [s0, s1] = haar_random_settings(derive_seed(500 + n, seed));
      const auto full = oracle::sorted_spectrum(oracle::full_bell_operator(s0, s1, n));
      worst = std::max(worst, oracle::multiset_distance(oracle::pooled_block_spectrum(s0, s1, n), full));
    }
  return {worst <= 1e-8, "max pooled-vs-full eigenvalue deviation " + fmt(worst, 3) + " over n=2,3 x 5 settings (tol 1e-8)"};
}

struct ScanCache {
  std::vector<IrrepScanRow> rows;
  double seconds = 0.0;
  bool done = false;
};

ScanCache& scan25() {
  static ScanCache cache;
  if (!cache.done) {
    const auto start = Clock::now();
    OptimizationConfig config;
    config.seed = 25;
    cache.rows = scan_irreps(25, config);
    cache.seconds = seconds_since(start);
    cache.done = true;
    std::ofstream csv(artifacts() / "scan_n25.csv");
    write_scan_csv(csv, cache.rows);
    Json j = Json::array();
    for (const auto& row : cache.rows) j.push_back(to_json(row));
    std::ofstream(artifacts() / "scan_n25.json") << dump_json(j);
  }
  return cache;
}

// 6
Outcome violation_onset() {
  OptimizationConfig config;
  config.seed = 7;
  const double seven = optimize_measurements({7, 0}, 7, config).best_value;
  const double eight = optimize_measurements({8, 0}, 8, config).best_value;
  const ScanCache& scan = scan25();
  double sym = 0.0, other = std::numeric_limits<double>::infinity();
  IrrepLabel runner_up;
  for (const auto& row : scan.rows) {
    if (row.label == IrrepLabel{25, 0}) {
      sym = row.violation;
    } else if (row.violation < other) {
      other = row.violation;
      runner_up = row.label;
    }
  }
  const bool pass = seven >= -1e-6 && eight < -1e-7 && sym <= other;
  return {pass, "n=7 (7,0): " + fmt(seven, 4) + " (>= -1e-6); n=8 (8,0): " + fmt(eight, 6) +
                    " (< -1e-7); n=25 (25,0): " + fmt(sym, 6) + " vs next best (" + std::to_string(runner_up.p) + "," +
                    std::to_string(runner_up.q) + "): " + fmt(other, 6) + "; n=25 scan of " +
                    std::to_string(scan.rows.size()) + " irreps took " + fmt(scan.seconds / 60.0, 4) +
                    " min at default restarts"};
}

// 7
Outcome brody_calibration() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  std::uint64_t seed = 70;
  for (double omega : {0.0, 0.3, 0.7, 1.0}) {
    const double fitted = fit_brody(oracle::brody_samples(omega, 5000, seed++)).omega;
    pass = pass && std::abs(fitted - omega) <= 0.05;
    detail += fmt(omega, 2) + "->" + fmt(fitted, 4) + " ";
  }
  const double goe = analyze_spectrum(oracle::goe_spectrum(500, 77), {}).brody_omega;
  auto uniform_levels = [](std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u;
    std::vector<double> levels(count);
    for (double& x : levels) x = u(rng);
    return levels;
  };
  const double flat = analyze_spectrum(uniform_levels(5000, 78), {}).brody_omega;
  // Sampling spread at 500 levels, reported for reference.
  std::vector<double> small;
  for (std::uint64_t seed = 0; seed < 100; ++seed) small.push_back(analyze_spectrum(uniform_levels(500, 1000 + seed), {}).brody_omega);
  const auto over = std::count_if(small.begin(), small.end(), [](double w) { return w > 0.05; });
  pass = pass && goe >= 0.85 && flat <= 0.05;
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 120.0;
  return {pass, "recovered " + detail + "(tol 0.05); GOE 500: " + fmt(goe, 4) + " (>= 0.85); Poisson 5000 levels: " +
                    fmt(flat, 4) + " (<= 0.05) [500 levels: median " + fmt(median(small), 3) + ", " +
                    std::to_string(over) + "/100 draws above 0.05]; " + fmt(elapsed, 3) + " s"};
}

// 8
Outcome integrability_association() {
  const ScanCache& scan = scan25();
  int violating = 0, integrable = 0;
  std::string chaotic;
  for (const auto& row : scan.rows) {
    if (row.violation >= kViolationThreshold || !row.classification) continue;
    ++violating;
    if (*row.classification == SpectralClass::kIntegrable) {
      ++integrable;
    } else {
      chaotic += " (" + std::to_string(row.label.p) + "," + std::to_string(row.label.q) + ")";
    }
  }
  const double fraction = violating ? double(integrable) / violating : 0.0;
  return {violating > 0 && fraction >= 0.8,
          std::to_string(integrable) + "/" + std::to_string(violating) + " violating irreps Integrable (" +
              fmt(100.0 * fraction, 4) + "%, need >= 80%)" + (chaotic.empty() ? "" : "; chaotic:" + chaotic)};
}

// 9
Outcome random_settings_chaos() {
  const auto start = Clock::now();
  const auto report = random_measurement_scan(25, {25, 0}, 1000, 9);
  std::ofstream csv(artifacts() / "random_scan_n25.csv");
  write_omega_histogram_csv(csv, report);
  const double elapsed = seconds_since(start);
  const bool pass = report.median_omega > 0.3 && report.violation_fraction > 0.5 && elapsed < 7200.0;
  return {pass, "n=25 (25,0), 1000 Haar settings: median omega " + fmt(report.median_omega, 4) +
                    " (> 0.3), violation fraction " + fmt(report.violation_fraction, 4) + " (> 0.5), failures " +
                    std::to_string(report.failures) + "; " + fmt(elapsed, 4) + " s"};
}

// 10
Outcome volume_trend(const std::vector<int>& parties, double limit_seconds, const std::string& csv_name) {
  const auto start = Clock::now();
  std::vector<VolumeReport> reports;
  std::vector<double> medians;
  std::string detail, radii;
  for (int n : parties) {
    std::vector<double> fractions, radius;
    for (std::uint64_t seed : {1, 2, 3}) {
      VolumeConfig config;
      config.directions = 100;
      config.mc_samples = 10'000;
      config.seed = seed;
      reports.push_back(poisson_region_volume(n, {n, 0}, config));
      fractions.push_back(reports.back().volume_fraction);
      radius.push_back(reports.back().avg_radius);
    }
    medians.push_back(median(fractions));
    detail += "n=" + std::to_string(n) + ": " + fmt(medians.back(), 4) + " ";
    radii += "n=" + std::to_string(n) + ": " + fmt(median(radius), 4) + " ";
  }
  std::ofstream csv(artifacts() / csv_name);
  write_volume_csv(csv, reports);
  bool pass = true;
  for (std::size_t i = 1; i < medians.size(); ++i) pass = pass && medians[i] < medians[i - 1];
  const double elapsed = seconds_since(start);
  if (limit_seconds > 0.0) pass = pass && elapsed < limit_seconds;
  return {pass, "median volume fraction over seeds 1-3: " + detail + "(strictly decreasing); median radius " + radii + "; " +
                    fmt(elapsed / 60.0, 4) + " min" +
                    (limit_seconds > 0.0 ? " (limit " + fmt(limit_seconds / 60.0, 3) + " min)" : "")};
}

// 11
Outcome determinism() {
  const fs::path dir = artifacts() / "determinism";
  fs::create_directories(dir);
  const std::string cli = BELLCHAOS_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify", "verify-classical --n 25 --mode stochastic --seed 7 --samples 20000"},
      {"optimize", "optimize --n 8 --p 8 --q 0 --seed 3 --out {dir}/optimize_{run}.json"},
      {"scan", "scan --n 6 --seed 4 --restarts 4 --out {dir}/scan_{run}.csv"},
      {"random", "random-scan --n 12 --p 12 --q 0 --samples 200 --seed 5 --out {dir}/random_{run}.csv"},
      {"volume", "volume --n 8 --p 8 --q 0 --directions 10 --mc 1000 --seed 3 --restarts 4 --out {dir}/volume_{run}.csv"},
      {"spectrum", "spectrum --n 8 --p 8 --q 0 --settings {dir}/optimize_a.json --out {dir}/spectrum_{run}.csv"},
      {"build", "build-bell --n 8 --p 8 --q 0 --settings {dir}/optimize_a.json --out {dir}/bell_{run}.bin"},
  };
  auto expand = [&](std::string s, const std::string& run) {
    for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{{"{dir}", dir.string()}, {"{run}", run}}) {
      for (std::size_t at = s.find(key); at != std::string::npos; at = s.find(key, at)) s.replace(at, key.size(), value);
    }
    return s;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  bool pass = true;
  std::string failed;
  int compared = 0;
  for (const auto& [name, args] : commands) {
    for (const std::string run : {"a", "b"}) {
      const std::string line = cli + " " + expand(args, run) + " > " + (dir / (name + "_" + run + ".stdout")).string();
      if (std::system(line.c_str()) != 0) {
        pass = false;
        failed += " " + name + "(exit)";
      }
    }
    std::string a = slurp(dir / (name + "_a.stdout")), b = slurp(dir / (name + "_b.stdout"));
    // The runs differ only in their output file names.
    for (std::string* s : {&a, &b}) {
      for (const std::string run : {"_a.", "_b."}) {
        for (std::size_t at = s->find(run); at != std::string::npos; at = s->find(run, at)) s->replace(at, run.size(), "_x.");
      }
    }
    ++compared;
    if (a.empty() || a != b) {
      pass = false;
      failed += " " + name + "(stdout)";
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string file = entry.path().filename().string();
      if (file.rfind(name == "random" ? "random_a." : name + "_a.", 0) == 0 && entry.path().extension() != ".stdout") {
        std::string other = file;
        other.replace(other.find("_a."), 3, "_b.");
        ++compared;
        if (slurp(entry.path()) != slurp(dir / other)) {
          pass = false;
          failed += " " + file;
        }
      }
    }
  }
  return {pass, std::to_string(compared) + " outputs of " + std::to_string(commands.size()) +
                    " seeded commands compared byte-for-byte across reruns" +
                    (failed.empty() ? "" : "; differing:" + failed)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1", classical_bound},
      {"2", polynomial_equivalence},
      {"3", irrep_dimensions},
      {"4", irrep_algebra},
      {"5", block_decomposition},
      {"6", violation_onset},
      {"7", brody_calibration},
      {"8", integrability_association},
      {"9", random_settings_chaos},
      {"10-smoke", [] { return volume_trend({8, 12}, 1800.0, "volume_smoke.csv"); }},
      {"10", [] { return volume_trend({10, 15, 20, 25}, 0.0, "volume.csv"); }},
      {"11", determinism},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << id << "] " << outcome.detail << " ("
              << fmt(seconds_since(start), 4) << " s)" << std::endl;
  }
  return failures ? 1 : 0;
}
