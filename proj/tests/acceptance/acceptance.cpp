// Runs the desk-scale acceptance checks and prints one PASS/FAIL line each.
// Exit status is 0 only when every check passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sqg/errors.hpp"
#include "sqg/estimates.hpp"
#include "sqg/fft.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/io.hpp"
#include "sqg/kernels.hpp"
#include "sqg/littlewood_paley.hpp"
#include "sqg/solver.hpp"
#include "sqg/spectral_ops.hpp"
#include "test_support.hpp"

namespace sqg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

const Claim& find_claim(const EstimateReport& r, const std::string& id) {
  for (const Claim& c : r.claims) {
    if (c.id == id) return c;
  }
  throw InvalidArgument("claim '" + id + "' missing from the report");
}

std::vector<const ConstantReport*> find_reports(const std::vector<ConstantReport>& reports,
                                                const std::string& id) {
  std::vector<const ConstantReport*> out;
  for (const auto& r : reports) {
    if (r.id == id) out.push_back(&r);
  }
  if (out.empty()) throw InvalidArgument("report '" + id + "' missing");
  return out;
}

std::string params_text(const ConstantReport& r) {
  std::string s;
  for (const auto& [k, v] : r.params) s += (s.empty() ? "" : ",") + k + "=" + fmt(v);
  return s;
}

// ---- identities -----------------------------------------------------------

Outcome identities() {
  const auto start = Clock::now();
  const int trials = 100;
  double round_trip = 0.0, parseval = 0.0, bony = 0.0, localization = 0.0, divergence = 0.0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t seed = 7000 + i;
    {
      const PhysicalField f = test::random_physical(256, seed);
      const SpectralField F = forward_transform(f);
      const PhysicalField back = inverse_transform(F);
      double amp = 0.0;
      for (double x : f.values()) amp = std::max(amp, std::abs(x));
      round_trip = std::max(round_trip, test::max_abs_diff(f.values(), back.values()) / amp);
      double physical = 0.0;
      for (double x : f.values()) physical += x * x;
      physical /= 256.0 * 256.0;
      const auto tables = SpectralTables::get(256);
      double spectral = 0.0;
      for (std::size_t k = 0; k < F.coeffs().size(); ++k) {
        spectral += tables->multiplicity[k] * std::norm(F.coeffs()[k]);
      }
      parseval = std::max(parseval, std::abs(spectral / physical - 1.0));
    }
    {
      const SpectralField f = test::random_spectral(128, seed, 1.5);
      const SpectralField g = test::random_spectral(128, seed + 500, 1.5);
      const BonyDecomposition d = bony_paraproducts(f, g);
      const SpectralField fg = test::without_mean(dealiased_product(f, g));
      const SpectralField residual =
          test::without_mean(fg - d.paraproduct_fg - d.paraproduct_gf - d.remainder);
      bony = std::max(bony, sobolev_norm(residual, 0.0) / sobolev_norm(fg, 0.0));
    }
    {
      const SpectralField u = test::random_spectral(64, seed, 0.5);
      const SpectralField v = test::random_spectral(64, seed + 900, 0.5);
      const double scale = sobolev_norm(u, 0.0) * sobolev_norm(v, 0.0);
      const BandRange bands = BandRange::for_grid(u.grid());
      for (int j = bands.j_min; j <= bands.j_max; ++j) {
        const SpectralField dv = lp_project(v, j, Projection::delta);
        const double gap =
            test::inner(u, dv) - test::inner(lp_project(u, j, Projection::tilde), dv);
        localization = std::max(localization, std::abs(gap) / scale);
      }
    }
    {
      const SpectralField theta = test::random_spectral(256, seed, 0.5);
      const Velocity u = riesz_velocity(theta);
      const TorusGrid& g = theta.grid();
      for (int r = 0; r < g.n(); ++r) {
        for (int c = 0; c < g.half_cols(); ++c) {
          if (g.is_nyquist(r, c) || (r == 0 && c == 0)) continue;
          const Complex d = double(g.freq_of_row(r)) * u.u1.at(r, c) + double(g.freq_of_col(c)) * u.u2.at(r, c);
          const double m = std::abs(theta.at(r, c)) * std::hypot(g.freq_of_row(r), g.freq_of_col(c));
          if (m > 0.0) divergence = std::max(divergence, std::abs(d) / m);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  const double eps = std::numeric_limits<double>::epsilon();
  Outcome o;
  o.pass = round_trip < 1e-12 && parseval < 1e-12 && bony < 1e-10 && localization < 1e-12 &&
           divergence < 16 * eps && elapsed < 60.0;
  o.detail = "round_trip=" + fmt(round_trip) + " parseval=" + fmt(parseval) + " bony=" + fmt(bony) +
             " localization=" + fmt(localization) + " divergence=" + fmt(divergence) + " (" +
             fmt(elapsed) + " s, 100 trials each)";
  return o;
}

// ---- inequality suite -----------------------------------------------------

Outcome semigroup_sandwich(const std::vector<ConstantReport>& reports) {
  Outcome o{true, ""};
  std::size_t violations = 0;
  double trials = 0.0;
  for (const ConstantReport* r : find_reports(reports, "semigroup_block")) {
    violations += r->violations;
    trials += r->extras.at("trials");
    o.pass = o.pass && r->verdict;
  }
  o.pass = o.pass && violations == 0;
  o.detail = "violations=" + std::to_string(violations) + " of " + fmt(trials) +
             " band trials, gamma in {0.6, 1, 1.5}";
  return o;
}

Outcome linear_smoothing(const std::vector<ConstantReport>& reports) {
  Outcome o{true, ""};
  for (const ConstantReport* r : find_reports(reports, "linear_smoothing")) {
    o.pass = o.pass && r->verdict;
    o.detail += (o.detail.empty() ? "" : "; ") + params_text(*r) + " growth=" + fmt(r->growth) +
                " trend_violations=" + std::to_string(r->violations);
  }
  return o;
}

Outcome commutator(const std::vector<ConstantReport>& reports, double elapsed) {
  Outcome o{elapsed < 600.0, ""};
  const auto comm = find_reports(reports, "commutator_localized");
  double worst = 0.0;
  for (const ConstantReport* r : comm) {
    o.pass = o.pass && r->verdict && r->ensemble_size >= 50 && r->grid_sizes.size() >= 3;
    worst = std::max(worst, r->growth);
  }
  o.pass = o.pass && comm.size() == 6;
  o.detail = std::to_string(comm.size()) + " tuples, max growth=" + fmt(worst) + " over n=64,128,256 (" +
             fmt(elapsed) + " s for the inequality suite)";
  return o;
}

// ---- solver ---------------------------------------------------------------

SolverConfig solver_config(int n, double gamma, double dt, double t_end, bool linear = false) {
  SolverConfig c;
  c.n = n;
  c.gamma = gamma;
  c.dt = dt;
  c.t_end = t_end;
  c.linear_only = linear;
  return c;
}

SpectralField run_to(const SolverConfig& c, const SpectralField& theta0) {
  const double samples[] = {c.t_end};
  return integrate(c, theta0, samples, NormSpec{}).final_state.theta;
}

SpectralField smooth_data(int n, std::uint64_t seed) {
  SpectralField F = truncate_two_thirds(test::random_spectral(n, seed, 2.0));
  return F * (0.5 / lp_norm(inverse_transform(F), kInfinity));
}

Outcome solver_correctness() {
  std::ostringstream d;
  bool pass = true;

  double linear = 0.0;
  for (double gamma : {0.6, 1.0, 1.5}) {
    const SpectralField theta = truncate_two_thirds(test::random_spectral(64, 3, 1.0));
    const SpectralField a = run_to(solver_config(64, gamma, 1e-2, 1.0, true), theta);
    const SpectralField b = semigroup_apply(theta, gamma, 1.0);
    linear = std::max(linear, test::max_abs_diff(a, b) / b.max_abs());
  }
  pass = pass && linear < 1e-12;
  d << "linear=" << fmt(linear);

  double orbit = 0.0;
  for (double gamma : {0.6, 1.0, 1.5}) {
    const SpectralField theta0 = test::sine_mode(64, 1, 0);
    const SpectralField out = run_to(solver_config(64, gamma, 1e-3, 1.0), theta0);
    const SpectralField ref = theta0 * std::exp(-std::pow(test::kTwoPi, gamma));
    orbit = std::max(orbit, test::max_abs_diff(out, ref) / ref.max_abs());
  }
  pass = pass && orbit < 1e-10;
  d << " orbit=" << fmt(orbit);

  double worst_order_gap = 0.0;
  std::string orders;
  for (double gamma : {0.6, 1.0, 1.5}) {
    const SpectralField theta0 = smooth_data(32, 17);
    const SpectralField ref = run_to(solver_config(32, gamma, 0.02 / 16, 0.5), theta0);
    const double e1 = sobolev_norm(run_to(solver_config(32, gamma, 0.02, 0.5), theta0) - ref, 0.0);
    const double e2 = sobolev_norm(run_to(solver_config(32, gamma, 0.01, 0.5), theta0) - ref, 0.0);
    const double order = std::log2(e1 / e2);
    worst_order_gap = std::max(worst_order_gap, std::abs(order - 2.0));
    orders += (orders.empty() ? "" : ",") + fmt(order);
  }
  pass = pass && worst_order_gap <= 0.3;
  d << " richardson=[" << orders << "]";

  // Every step of a smooth run: mean, L^2 and L^inf.
  const SolverConfig c = solver_config(64, 1.0, 2e-3, 4.0);
  SimulationState s{0.0, smooth_data(64, 12), 0};
  double l2_prev = sobolev_norm(s.theta, 0.0);
  double linf_prev = lp_norm(inverse_transform(s.theta), kInfinity);
  double mean = 0.0;
  double l2_rise = -std::numeric_limits<double>::infinity();
  double linf_rise = -std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::lround(c.t_end / c.dt));
  for (int i = 0; i < steps; ++i) {
    s = step(s, c.dt, c);
    const double l2 = sobolev_norm(s.theta, 0.0);
    const double linf = lp_norm(inverse_transform(s.theta), kInfinity);
    mean = std::max(mean, std::abs(s.theta.mean()));
    l2_rise = std::max(l2_rise, l2 / l2_prev - 1.0);
    linf_rise = std::max(linf_rise, linf / linf_prev - 1.0);
    l2_prev = l2;
    linf_prev = linf;
  }
  pass = pass && mean < 1e-14 && l2_rise < 0.0 && linf_rise <= 1e-6;
  d << " mean=" << fmt(mean) << " l2_step_change<=" << fmt(l2_rise) << " linf_step_rise<="
    << fmt(linf_rise) << " (" << steps << " steps)";
  return {pass, d.str()};
}

// ---- rough-data suite -----------------------------------------------------

Outcome rough_smoothing(const EstimateReport& r, double elapsed) {
  Outcome o{elapsed < 300.0, ""};
  for (double beta : r.spec.beta_list) {
    const Claim& c = find_claim(r, "thm1[beta=" + NormTrajectory::sobolev_column(beta).substr(3) + "]");
    o.pass = o.pass && c.verdict == Verdict::pass;
    o.detail += (o.detail.empty() ? "" : "; ") + c.id + " slope=" + fmt(c.measured) + " bound=" +
                fmt(c.threshold) + " trend=" + fmt(c.details.at("trend")) + " " + to_string(c.verdict);
  }
  o.detail += " (suite " + fmt(elapsed) + " s)";
  return o;
}

Outcome time_integrability(const EstimateReport& r) {
  Outcome o{true, ""};
  for (const Claim& c : r.claims) {
    if (c.id.rfind("thm3", 0) != 0) continue;
    o.pass = o.pass && c.verdict == Verdict::pass;
    o.detail += (o.detail.empty() ? "" : "; ") + c.id + " value=" + fmt(c.measured) + " quadrature_change=" +
                fmt(c.details.at("growth")) + " " + to_string(c.verdict);
  }
  return o;
}

Outcome global_decay(const EstimateReport& r, double elapsed) {
  Outcome o{elapsed < 600.0, ""};
  for (const char* id : {"thm4-decay", "linf-decay", "analyticity"}) {
    const Claim& c = find_claim(r, id);
    o.pass = o.pass && c.verdict == Verdict::pass;
    o.detail += (o.detail.empty() ? "" : "; ") + c.id + " measured=" + fmt(c.measured) + " " +
                to_string(c.verdict);
  }
  return o;
}

Outcome determinism(const EstimateReport& est, const std::vector<ConstantReport>& ineq,
                    const InequalitySuiteConfig& ineq_config) {
  const EstimateReport est2 = run_suite(est.spec);
  const auto ineq2 = run_inequality_suite(ineq_config);
  const bool same_est = estimate_report_body(est) == estimate_report_body(est2);
  const bool same_ineq = inequality_report_body(ineq_config, ineq) == inequality_report_body(ineq_config, ineq2);
  return {same_est && same_ineq, std::string("estimate report ") + (same_est ? "identical" : "differs") +
                                     ", inequality report " + (same_ineq ? "identical" : "differs")};
}

int run_all() {
  kernels::configure_threads_from_env();
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %-20s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report("identities", identities);

  const InequalitySuiteConfig ineq_config;
  auto start = Clock::now();
  const auto ineq = run_inequality_suite(ineq_config);
  const double ineq_seconds = seconds_since(start);
  report("semigroup-sandwich", [&] { return semigroup_sandwich(ineq); });
  report("linear-smoothing", [&] { return linear_smoothing(ineq); });
  report("commutator", [&] { return commutator(ineq, ineq_seconds); });

  report("solver", solver_correctness);

  const ExperimentSpec spec;
  start = Clock::now();
  const EstimateReport est = run_suite(spec);
  const double est_seconds = seconds_since(start);
  report("rough-smoothing", [&] { return rough_smoothing(est, est_seconds); });
  report("time-integrability", [&] { return time_integrability(est); });
  report("global-decay", [&] { return global_decay(est, est_seconds); });
  report("determinism", [&] { return determinism(est, ineq, ineq_config); });

  std::printf("%d of 9 checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace sqg

int main() { return sqg::run_all(); }
