#include "sqg/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "sqg/errors.hpp"
#include "sqg/estimates.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/io.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"

namespace sqg {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out_dir, "output directory (overrides output_dir)");
  sub->add_option("--seed", opts.seed, "random seed (overrides seed)");
  sub->add_flag("--quiet", opts.quiet, "print nothing but errors");
}

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig cfg = opts.config_path.empty() ? parse_config("{}") : load_config(opts.config_path);
  if (opts.seed) {
    cfg.spec.seed = *opts.seed;
    cfg.inequalities.seed = *opts.seed;
  }
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const RunConfig& cfg, bool quiet, std::ostream& out) {
  const ExperimentSpec& spec = cfg.spec;
  SolverConfig solver;
  solver.gamma = spec.gamma;
  solver.n = spec.n;
  solver.dt = spec.dt;
  solver.t_end = spec.t_end;
  const SpectralField theta0 = make_initial(spec.initial, spec.seed, spec.n);
  const auto samples = spec.schedule.times(spec.t_end);
  const auto edges = default_phase_edges(spec.window_end, spec.t_end);
  const NormSpec norms{spec.sobolev_orders(), spec.t0};
  const auto start = std::chrono::steady_clock::now();
  const IntegrationResult result =
      integrate_phased(solver, theta0, samples, norms, edges, spec.dt_max);
  const fs::path dir = cfg.output_dir;
  write_timeseries(result.trajectory, dir / "trajectory.csv");
  write_snapshot(dir / "final.sqgf", result.final_state, spec.gamma);
  if (!quiet) {
    out << "simulate: n=" << spec.n << " gamma=" << spec.gamma << " t_end=" << spec.t_end
        << " steps=" << result.final_state.step_count << " samples=" << result.trajectory.size()
        << " (" << seconds_since(start) << " s)\n"
        << "wrote " << (dir / "trajectory.csv").string() << ", " << (dir / "final.sqgf").string()
        << "\n";
  }
  return kExitPass;
}

int cmd_verify_estimates(const RunConfig& cfg, bool quiet, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const EstimateReport report = run_suite(cfg.spec);
  const fs::path dir = cfg.output_dir;
  write_estimate_report(report, dir / "estimates.json");
  if (!report.trajectory.empty()) write_timeseries(report.trajectory, dir / "trajectory.csv");
  if (!report.small_trajectory.empty()) {
    write_timeseries(report.small_trajectory, dir / "small_trajectory.csv");
  }
  if (report.final_state) write_snapshot(dir / "final.sqgf", *report.final_state, cfg.spec.gamma);
  if (!quiet) {
    out << summarize_report(dir / "estimates.json").text << "(" << seconds_since(start) << " s)\n";
  }
  if (report.diverged()) return kExitDiverged;
  return report.any_failed() ? kExitFailed : kExitPass;
}

int cmd_verify_inequalities(const RunConfig& cfg, bool quiet, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto reports = run_inequality_suite(cfg.inequalities);
  const fs::path path = fs::path(cfg.output_dir) / "inequalities.json";
  write_inequality_report(cfg.inequalities, reports, path);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.verdict;
  if (!quiet) out << summarize_report(path).text << "(" << seconds_since(start) << " s)\n";
  return ok ? kExitPass : kExitFailed;
}

int cmd_report(const std::string& path, bool quiet, std::ostream& out) {
  const ReportSummary summary = summarize_report(path);
  if (!quiet) out << summary.text;
  if (summary.diverged) return kExitDiverged;
  return summary.failed ? kExitFailed : kExitPass;
}

// Median wall time of `reps` calls, in microseconds.
double time_us(int reps, const std::function<void()>& fn) {
  std::vector<double> samples;
  fn();
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    samples.push_back(1e6 * seconds_since(start));
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

int cmd_bench(const RunConfig& cfg, int steps, bool quiet, std::ostream& out) {
  namespace k = kernels;
  const int n = cfg.spec.n;
  const TorusGrid grid(n);
  const std::size_t spec_size = grid.spectral_size();
  const std::size_t phys_size = 4 * grid.physical_size();  // padded product grid
  std::mt19937_64 rng(cfg.spec.seed);
  std::normal_distribution<double> normal;
  std::vector<k::Complex> c(spec_size), c_out(spec_size), c2(spec_size), c3(spec_size);
  std::vector<double> sym(spec_size), a(phys_size), b(phys_size), prod(phys_size);
  for (auto& z : c) z = {normal(rng), normal(rng)};
  for (auto& z : c2) z = {normal(rng), normal(rng)};
  for (auto& x : sym) x = std::abs(normal(rng));
  for (auto& x : a) x = normal(rng);
  for (auto& x : b) x = normal(rng);
  const k::EtdWeights w{sym, sym, sym};

  struct Row {
    const char* name;
    std::function<void()> serial;
    std::function<void()> omp;
  };
  double sink = 0.0;
  const std::vector<Row> rows{
      {"scale_into", [&] { k::serial::scale_into(c, sym, c_out); },
       [&] { k::omp::scale_into(c, sym, c_out); }},
      {"product(2n)", [&] { k::serial::product(a, b, prod); }, [&] { k::omp::product(a, b, prod); }},
      {"etd_predict", [&] { k::serial::etd_predict(w, c, c2, c_out); },
       [&] { k::omp::etd_predict(w, c, c2, c_out); }},
      {"etd_correct", [&] { k::serial::etd_correct(w, c, c2, c3, c_out); },
       [&] { k::omp::etd_correct(w, c, c2, c3, c_out); }},
      {"weighted_sum_sq", [&] { sink += k::serial::weighted_sum_sq(c, sym); },
       [&] { sink += k::omp::weighted_sum_sq(c, sym); }},
      {"max_abs(2n)", [&] { sink += k::serial::max_abs(a); }, [&] { sink += k::omp::max_abs(a); }},
  };

  SolverConfig solver;
  solver.gamma = cfg.spec.gamma;
  solver.n = n;
  solver.dt = cfg.spec.dt;
  Stepper stepper(solver);
  SimulationState state{0.0, make_initial(cfg.spec.initial, cfg.spec.seed, n), 0};
  const double step_us = time_us(steps, [&] { stepper.advance(state, solver.dt); });

  if (!quiet) {
    char line[160];
    out << "bench: n=" << n << " threads=" << k::max_threads() << "\n";
    std::snprintf(line, sizeof(line), "  %-16s %12s %12s %8s\n", "kernel", "serial_us", "omp_us",
                  "speedup");
    out << line;
    for (const Row& r : rows) {
      const double ts = time_us(20, r.serial);
      const double to = time_us(20, r.omp);
      std::snprintf(line, sizeof(line), "  %-16s %12.1f %12.1f %8.2f\n", r.name, ts, to, ts / to);
      out << line;
    }
    std::snprintf(line, sizeof(line), "  %-16s %12.1f us (median of %d)\n", "etd2 step", step_us,
                  steps);
    out << line;
  }
  return std::isfinite(sink) ? kExitPass : kExitFailed;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional dissipative SQG on the torus: simulation and estimate checks", "sqg"};
  app.require_subcommand(1);
  CommonOptions opts;
  std::string report_path;
  int bench_steps = 10;

  auto* simulate = app.add_subcommand("simulate", "evolve the configured initial data");
  auto* estimates = app.add_subcommand("verify-estimates", "run the smoothing and decay checks");
  auto* inequalities = app.add_subcommand("verify-inequalities", "run the inequality ensembles");
  auto* report = app.add_subcommand("report", "summarize a JSON report");
  auto* bench = app.add_subcommand("bench", "time serial and OpenMP kernels and one step");
  for (auto* sub : {simulate, estimates, inequalities, bench}) add_common(sub, opts);
  report->add_option("path", report_path, "estimates.json or inequalities.json")->required();
  report->add_flag("--quiet", opts.quiet, "print nothing but errors");
  bench->add_option("--steps", bench_steps, "timed solver steps")->check(CLI::PositiveNumber);

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("sqg");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  kernels::configure_threads_from_env();
  try {
    if (report->parsed()) return cmd_report(report_path, opts.quiet, out);
    const RunConfig cfg = resolve_config(opts);
    if (simulate->parsed()) return cmd_simulate(cfg, opts.quiet, out);
    if (estimates->parsed()) return cmd_verify_estimates(cfg, opts.quiet, out);
    if (inequalities->parsed()) return cmd_verify_inequalities(cfg, opts.quiet, out);
    return cmd_bench(cfg, bench_steps, opts.quiet, out);
  } catch (const ConfigError& e) {
    err << "sqg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DivergedError& e) {
    err << "sqg: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "sqg: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace sqg
