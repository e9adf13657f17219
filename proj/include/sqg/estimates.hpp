#pragma once

// Rough-data experiments: evolve, sample norms, fit rates and judge the
// smoothing, integrability and decay claims on the torus.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqg/fields.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// |c(j)| = amplitude (1+|j|)^{-(1+sigma)}, uniform phases, truncated to the
/// 2/3 band. Requires sigma > 0 and n >= 32.
SpectralField gen_rough_data(std::uint64_t seed, double sigma, int n, double amplitude);

/// Earliest time at which the dissipative scale t^{-1/gamma} reaches the 2/3 band:
/// (2 pi n / 3)^{-gamma}.
double resolved_time(int n, double gamma);

struct InitialData {
  enum class Kind { rough, sine };
  Kind kind = Kind::rough;
  double sigma = 1.05;  ///< spectral slope of rough data
  double amplitude = 1.0;
};

const char* to_string(InitialData::Kind kind);

SpectralField make_initial(const InitialData& data, std::uint64_t seed, int n);

struct SampleSchedule {
  enum class Kind { log, linear };
  Kind kind = Kind::log;
  int count = 480;
  double t_min = 1e-4;  ///< first positive sample of the log schedule

  /// t = 0 followed by `count` samples in (0, t_end]; just {0} when t_end = 0.
  std::vector<double> times(double t_end) const;
};

const char* to_string(SampleSchedule::Kind kind);

struct ExperimentSpec {
  double gamma = 1.0;
  int n = 256;
  double dt = 1e-4;
  /// Cap of the step used after the first phase; equal to dt for a fixed step.
  double dt_max = 1e-2;
  double t_end = 20.0;
  std::uint64_t seed = 1;
  InitialData initial;
  std::vector<double> beta_list{0.5, 1.0, 2.0};
  std::vector<std::pair<double, double>> beta_pairs{{0.0, 0.5}, {0.5, 0.5}};
  double t0 = 0.0;  ///< reference time of the y_diag column
  SampleSchedule schedule;
  double slope_tol = 0.15;
  double refinement_threshold = 0.1;
  double window_end = 5e-2;  ///< right edge of the smoothing-rate window
  double small_amplitude = 1e-2;
  int small_n = 128;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Sobolev orders recorded on trajectories: 2 - gamma + beta for every beta
  /// and pair sum, after 2 - gamma itself; configured order, duplicates dropped.
  std::vector<double> sobolev_orders() const;
};

/// Integrates with the fixed config.dt up to the first phase edge and then,
/// at each later edge, with min(dt_max, max(dt, cfl_dt / 2)) evaluated on the
/// state at that edge. Deterministic for fixed inputs.
IntegrationResult integrate_phased(const SolverConfig& config, const SpectralField& theta0,
                                   std::span<const double> sample_times, const NormSpec& norms,
                                   std::span<const double> phase_edges, double dt_max,
                                   const SampleObserver& observer = {});

/// Phase edges used by the suite and by `simulate`.
std::vector<double> default_phase_edges(double window_end, double t_end);

struct RateFit {
  double t_a = 0.0;
  double t_b = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of log v against log t (or t when log_time is false) over
/// samples in [t_a, t_b]. Throws InvalidArgument with fewer than 8 samples or
/// nonpositive values.
RateFit fit_rate(std::span<const double> t, std::span<const double> v, double t_a, double t_b,
                 bool log_time = true);

struct SmoothingMeasurement {
  double beta = 0.0;
  double order = 0.0;  ///< 2 - gamma + beta
  RateFit fit;
  double bound = 0.0;  ///< -beta/gamma - tol
  double sup_weighted = 0.0;  ///< sup over the window of t^{beta/gamma} |theta|_{H^order}
  /// Fraction of consecutive window samples where the weighted norm increases with t.
  double trend_fraction = 0.0;
  bool trend = false;
  bool pass = false;
};

/// Requires t_a >= resolved_time(n, gamma).
SmoothingMeasurement measure_smoothing(const NormTrajectory& trajectory, double beta,
                                       double gamma, int n, double t_a, double t_b,
                                       double tol = 0.15);

struct IntegrabilityMeasurement {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double value = 0.0;       ///< all samples
  double value_half = 0.0;  ///< every other sample
  double growth = 0.0;      ///< |value / value_half - 1|
  double pointwise_bound = 0.0;  ///< M^p log(t_b/t_a) integral bound from the sup
  bool pass = false;
};

/// L^{gamma/beta2}(t_a, t_b) norm of t^{beta1/gamma}|theta|_{H^{2-gamma+beta1+beta2}}
/// by log-uniform trapezoid quadrature. Requires beta2 in (0, gamma/2].
IntegrabilityMeasurement measure_time_integrability(const NormTrajectory& trajectory,
                                                    double beta1, double beta2, double gamma,
                                                    double t_a, double t_b,
                                                    double threshold = 0.1);

/// Per-sample shell sums of |c(j)| grouped by |j|^2, for the y(t; T0) scan.
class ShellRecorder {
 public:
  explicit ShellRecorder(int n);
  void record(const SimulationState& state);
  SampleObserver observer();

  /// Smallest recorded sample time T0 with y(t; T0) <= level at every recorded t >= T0.
  std::optional<double> first_time_below(double level) const;
  /// y(t_i; t0) for recorded sample i.
  double y(std::size_t i, double t0) const;
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<int> shell_of_mode_;  ///< index into radii_, -1 outside the band
  std::vector<double> radii_;
  std::vector<double> times_;
  std::vector<std::vector<double>> sums_;
};

struct DecayMeasurement {
  RateFit tail;                  ///< log |theta|_{H^{1+beta}} against t
  double sup_linf_weighted = 0;  ///< sup (1+t)|theta|_inf over all samples
  double early_linf_weighted = 0;  ///< sup over [1, 5]
  double late_linf_weighted = 0;   ///< sup over (5, t_end]
  std::optional<double> t0;
  double sup_gradient = 0.0;
  bool tail_pass = false;
  bool linf_pass = false;
  bool analyticity_pass = false;
};

/// Requires gamma == 1 and a trajectory reaching t >= 10. The inhomogeneous
/// norm is sqrt(l2^2 + hs:(1+beta)^2).
DecayMeasurement measure_global_decay(const NormTrajectory& trajectory, double beta,
                                      double gamma, const ShellRecorder* shells,
                                      double tail_start = 10.0, double tail_end = 20.0);

enum class Verdict { pass, fail, not_evaluated, recorded, diverged };
const char* to_string(Verdict v);

struct Claim {
  std::string id;
  std::string quantity;
  double measured = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::not_evaluated;
  std::map<std::string, double> details;
};

struct EstimateReport {
  ExperimentSpec spec;
  std::vector<Claim> claims;
  NormTrajectory trajectory;        ///< main run
  NormTrajectory small_trajectory;  ///< small-amplitude run
  std::optional<SimulationState> final_state;

  bool any_failed() const;
  bool diverged() const;
};

/// Claim ids in report order for a spec.
std::vector<std::string> claim_ids(const ExperimentSpec& spec);

EstimateReport run_suite(const ExperimentSpec& spec);

}  // namespace sqg
