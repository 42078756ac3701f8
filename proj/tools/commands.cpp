#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace bellchaos::cli {

namespace {

Json envelope(const std::string& command, Json parameters, Json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"parameters", std::move(parameters)},
          {"result", std::move(result)}};
}

Json optimizer_parameters(const OptimizationConfig& c) {
  return {{"restarts", c.restarts},
          {"max_iterations", c.max_iterations},
          {"gradient_step", c.gradient_step},
          {"finite_difference_epsilon", c.finite_difference_epsilon},
          {"convergence_tolerance", c.convergence_tolerance},
          {"init_range", c.init_range},
          {"seed", c.seed},
          {"workers", c.workers}};
}

Json spectral_parameters(const SpectralConfig& c) {
  return {{"poly_degree", c.poly_degree},
          {"edge_trim_fraction", c.trim_edges ? c.edge_trim_fraction : 0.0},
          {"classification_threshold", c.classification_threshold},
          {"histogram_bins", c.histogram_bins},
          {"histogram_max", c.histogram_max}};
}

template <typename Writer>
void write_csv(const std::string& path, Writer&& writer) {
  if (path.empty()) return;
  std::ostringstream os;
  writer(os);
  write_text_file(path, os.str());
}

MeasurementParams load_settings(const std::string& path) { return params_from_json(read_json_file(path)); }

}  // namespace

CommandResult verify_classical(const VerifyClassicalOptions& o) {
  ClassicalSearchConfig search;
  search.mode = o.mode;
  search.seed = o.seed;
  search.samples = o.samples;
  search.workers = o.workers;
  const ClassicalMinimum minimum = minimize_classical(o.n, search);

  // Exhaustive agreement check whenever the strategy space is small enough.
  const bool exhaustive = composition_count(o.n) <= 1'000'000;
  const EquivalenceReport equivalence = verify_polynomial_equivalence(
      o.n, exhaustive ? 0 : o.equivalence_trials, derive_seed(o.seed, 1));

  const bool holds = minimum.minimum == 0 && equivalence.all_equal;
  Json params = {{"n", o.n},
                 {"mode", o.mode == SearchMode::kExhaustive ? "exhaustive" : "stochastic"},
                 {"seed", o.seed},
                 {"samples", o.samples},
                 {"equivalence_trials", exhaustive ? 0 : o.equivalence_trials},
                 {"workers", o.workers}};
  Json result = {{"classical", to_json(minimum)},
                 {"equivalence", to_json(equivalence)},
                 {"bound_is_zero", minimum.minimum == 0},
                 {"passed", holds}};
  return {envelope("verify-classical", std::move(params), std::move(result)), holds ? 0 : 1};
}

CommandResult optimize(const OptimizeOptions& o) {
  const OptimizationResult result = optimize_measurements(o.label, o.n, o.config);
  Json params = optimizer_parameters(o.config);
  params["n"] = o.n;
  params["label"] = to_json(o.label);
  Json body = to_json(result);
  body["violation_detected"] = result.best_value < kViolationThreshold;
  CommandResult out{envelope("optimize", std::move(params), std::move(body)), 0};
  if (!o.out.empty()) write_text_file(o.out, dump_json(out.report));
  return out;
}

CommandResult scan(const ScanOptions& o) {
  const std::vector<IrrepScanRow> rows = scan_irreps(o.n, o.config, o.spectral);
  Json params = {{"n", o.n}, {"optimizer", optimizer_parameters(o.config)}, {"spectral", spectral_parameters(o.spectral)}};
  Json list = Json::array();
  for (const IrrepScanRow& row : rows) list.push_back(to_json(row));
  write_csv(o.out, [&](std::ostream& os) { write_scan_csv(os, rows); });
  return {envelope("scan", std::move(params), {{"rows", list}}), 0};
}

CommandResult random_scan(const RandomScanOptions& o) {
  const RandomScanReport report =
      random_measurement_scan(o.n, o.label, o.samples, o.seed, o.spectral, o.workers);
  Json params = {{"n", o.n},
                 {"label", to_json(o.label)},
                 {"samples", o.samples},
                 {"seed", o.seed},
                 {"workers", o.workers},
                 {"spectral", spectral_parameters(o.spectral)}};
  write_csv(o.out, [&](std::ostream& os) { write_omega_histogram_csv(os, report); });
  return {envelope("random-scan", std::move(params), to_json(report)), 0};
}

CommandResult volume(const VolumeOptions& o) {
  std::optional<MeasurementParams> optimal;
  if (!o.settings.empty()) optimal = load_settings(o.settings);
  const VolumeReport report = poisson_region_volume(o.n, o.label, o.config, optimal);
  Json params = {{"n", o.n},
                 {"label", to_json(o.label)},
                 {"directions", o.config.directions},
                 {"mc_samples", o.config.mc_samples},
                 {"step_size", o.config.step_size},
                 {"transition_threshold", o.config.transition_threshold},
                 {"step_cap", o.config.step_cap},
                 {"seed", o.config.seed},
                 {"workers", o.config.workers},
                 {"settings", o.settings.empty() ? Json(nullptr) : Json(o.settings)},
                 {"optimizer", optimizer_parameters(o.config.optimizer)},
                 {"spectral", spectral_parameters(o.config.spectral)}};
  write_csv(o.out, [&](std::ostream& os) { write_volume_csv(os, {report}); });
  return {envelope("volume", std::move(params), to_json(report)), 0};
}

CommandResult spectrum(const SpectrumOptions& o) {
  MeasurementParams settings;
  Json source;
  if (!o.settings.empty()) {
    settings = load_settings(o.settings);
    source = o.settings;
  } else {
    settings = optimize_measurements(o.label, o.n, o.config).best_settings;
    source = "optimized";
  }
  const BellOperator b = build_bell_operator(settings, o.label, o.n);
  const SpectralReport report = analyze_operator(b, o.spectral);
  const auto bins = spacing_histogram(report.spacings, report.brody_omega, o.spectral);
  Json params = {{"n", o.n},
                 {"label", to_json(o.label)},
                 {"settings", source},
                 {"optimizer", o.settings.empty() ? optimizer_parameters(o.config) : Json(nullptr)},
                 {"spectral", spectral_parameters(o.spectral)}};
  Json result = to_json(report, bins);
  result["settings"] = to_json(settings);
  write_csv(o.out, [&](std::ostream& os) { write_spectrum_histogram_csv(os, bins); });
  return {envelope("spectrum", std::move(params), std::move(result)), 0};
}

CommandResult build_bell(const BuildBellOptions& o) {
  const MeasurementParams settings = load_settings(o.settings);
  const BellOperator b = build_bell_operator(settings, o.label, o.n);
  if (!o.out.empty()) {
    if (o.out.size() >= 4 && o.out.compare(o.out.size() - 4, 4, ".bin") == 0) {
      write_matrix_binary(o.out, b.matrix);
    } else {
      write_text_file(o.out, dump_json(matrix_to_json(b.matrix)));
    }
  }
  Json params = {{"n", o.n}, {"label", to_json(o.label)}, {"settings", o.settings}, {"out", o.out}};
  Json result = {{"dimension", b.matrix.rows()},
                 {"lambda_min", quantum_violation(b)},
                 {"hermiticity_error", (b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff()},
                 {"trace", b.matrix.trace().real()}};
  return {envelope("build-bell", std::move(params), std::move(result)), 0};
}

namespace {

void add_optimizer_flags(CLI::App* cmd, OptimizationConfig& c) {
  cmd->add_option("--restarts", c.restarts, "Random restarts")->capture_default_str()->check(CLI::Range(1, 1000000));
  cmd->add_option("--max-iter", c.max_iterations, "Iterations per restart")->capture_default_str()->check(CLI::Range(1, 1000000));
  cmd->add_option("--step", c.gradient_step, "Initial line-search step")->capture_default_str();
  cmd->add_option("--fd-eps", c.finite_difference_epsilon, "Finite-difference step")->capture_default_str();
  cmd->add_option("--tol", c.convergence_tolerance, "Gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
}

void add_spectral_flags(CLI::App* cmd, SpectralConfig& c) {
  cmd->add_option("--poly-degree", c.poly_degree, "Unfolding polynomial degree")->capture_default_str()->check(CLI::Range(1, 1000000));
  cmd->add_option("--trim", c.edge_trim_fraction, "Spacing fraction trimmed per edge")->capture_default_str()->check(CLI::Range(0.0, 0.5));
  cmd->add_option("--bins", c.histogram_bins, "Spacing histogram bins")->capture_default_str()->check(CLI::Range(1, 1000000));
}

void add_irrep_flags(CLI::App* cmd, int& n, IrrepLabel& label) {
  cmd->add_option("--n", n, "Number of parties")->required()->check(CLI::Range(1, 32));
  cmd->add_option("--p", label.p, "Irrep label p")->required()->check(CLI::NonNegativeNumber);
  cmd->add_option("--q", label.q, "Irrep label q")->required()->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Bell nonlocality and level statistics of permutationally invariant qutrit Bell operators"};
  app.require_subcommand(1);

  VerifyClassicalOptions vc;
  std::string vc_mode = "exhaustive";
  auto* c_vc = app.add_subcommand("verify-classical", "Minimize the Bell expression over local deterministic strategies");
  c_vc->add_option("--n", vc.n, "Number of parties")->required()->check(CLI::Range(1, 1000));
  c_vc->add_option("--mode", vc_mode, "exhaustive or stochastic")->capture_default_str()
      ->check(CLI::IsMember({"exhaustive", "stochastic"}));
  c_vc->add_option("--seed", vc.seed, "Seed for stochastic search")->capture_default_str();
  c_vc->add_option("--samples", vc.samples, "Stochastic starting points")->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  c_vc->add_option("--workers", vc.workers, "Worker threads (0 = all cores)")->capture_default_str();

  OptimizeOptions op;
  auto* c_op = app.add_subcommand("optimize", "Minimize lambda_min of the Bell operator in one irrep");
  add_irrep_flags(c_op, op.n, op.label);
  add_optimizer_flags(c_op, op.config);
  c_op->add_option("--out", op.out, "Also write the JSON report here");

  ScanOptions sc;
  auto* c_sc = app.add_subcommand("scan", "Optimize and classify every irrep of n parties");
  c_sc->add_option("--n", sc.n, "Number of parties")->required()->check(CLI::Range(2, 32));
  add_optimizer_flags(c_sc, sc.config);
  add_spectral_flags(c_sc, sc.spectral);
  c_sc->add_option("--out", sc.out, "CSV output");

  RandomScanOptions rs;
  auto* c_rs = app.add_subcommand("random-scan", "Level statistics under Haar-random settings");
  add_irrep_flags(c_rs, rs.n, rs.label);
  c_rs->add_option("--samples", rs.samples, "Random settings")->capture_default_str()->check(CLI::Range(100, 100'000'000));
  c_rs->add_option("--seed", rs.seed, "Master seed")->capture_default_str();
  c_rs->add_option("--workers", rs.workers, "Worker threads (0 = all cores)")->capture_default_str();
  add_spectral_flags(c_rs, rs.spectral);
  c_rs->add_option("--out", rs.out, "CSV output (omega histogram)");

  VolumeOptions vo;
  auto* c_vo = app.add_subcommand("volume", "Estimate the Poissonian region around the optimal settings");
  add_irrep_flags(c_vo, vo.n, vo.label);
  c_vo->add_option("--directions", vo.config.directions, "Random directions")->capture_default_str()->check(CLI::Range(1, 1000000));
  c_vo->add_option("--mc", vo.config.mc_samples, "Monte Carlo samples")->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  c_vo->add_option("--step-size", vo.config.step_size, "Perturbation norm per step")->capture_default_str()->check(CLI::NonNegativeNumber);
  c_vo->add_option("--threshold", vo.config.transition_threshold, "Omega transition threshold")->capture_default_str();
  c_vo->add_option("--step-cap", vo.config.step_cap, "Steps before a direction is excluded")->capture_default_str()->check(CLI::Range(1, 1000000));
  c_vo->add_option("--seed", vo.config.seed, "Master seed")->capture_default_str();
  c_vo->add_option("--workers", vo.config.workers, "Worker threads (0 = all cores)")->capture_default_str();
  c_vo->add_option("--restarts", vo.config.optimizer.restarts, "Optimizer restarts when no settings are given")
      ->capture_default_str()->check(CLI::Range(1, 1000000));
  c_vo->add_option("--settings", vo.settings, "Optimal settings JSON")->check(CLI::ExistingFile);
  c_vo->add_option("--out", vo.out, "CSV output");

  SpectrumOptions sp;
  auto* c_sp = app.add_subcommand("spectrum", "Spacing histogram and Brody fit of one Bell operator");
  add_irrep_flags(c_sp, sp.n, sp.label);
  c_sp->add_option("--settings", sp.settings, "Settings JSON (optimized when omitted)")->check(CLI::ExistingFile);
  add_optimizer_flags(c_sp, sp.config);
  add_spectral_flags(c_sp, sp.spectral);
  c_sp->add_option("--out", sp.out, "CSV output (histogram)");

  BuildBellOptions bb;
  auto* c_bb = app.add_subcommand("build-bell", "Write the Bell operator of one irrep");
  add_irrep_flags(c_bb, bb.n, bb.label);
  c_bb->add_option("--settings", bb.settings, "Settings JSON")->required()->check(CLI::ExistingFile);
  c_bb->add_option("--out", bb.out, "Output path (.bin for binary, JSON otherwise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CommandResult result;
    if (*c_vc) {
      vc.mode = vc_mode == "stochastic" ? SearchMode::kStochastic : SearchMode::kExhaustive;
      result = verify_classical(vc);
    } else if (*c_op) {
      result = optimize(op);
    } else if (*c_sc) {
      result = scan(sc);
    } else if (*c_rs) {
      result = random_scan(rs);
    } else if (*c_vo) {
      vo.config.optimizer.workers = vo.config.workers;
      result = volume(vo);
    } else if (*c_sp) {
      result = spectrum(sp);
    } else {
      result = build_bell(bb);
    }
    std::cout << dump_json(result.report);
    return result.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bellchaos::cli
