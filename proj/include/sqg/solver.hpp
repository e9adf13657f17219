#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqg/fields.hpp"

namespace sqg {

enum class Scheme { etd2 };

struct SolverConfig {
  double gamma = 1.0;  ///< dissipation exponent in (0, 2]
  int n = 128;
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::etd2;
  /// Drops the advection term so the flow reduces to the fractional heat semigroup.
  bool linear_only = false;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

struct SimulationState {
  double t = 0.0;
  SpectralField theta;
  long step_count = 0;
};

/// Multiplier exp(-t (2 pi |j|)^gamma); Nyquist modes are zeroed.
SpectralField semigroup_apply(const SpectralField& theta, double gamma, double t);

/// N(theta) = -div(u theta) with u = riesz_velocity(theta), products on a 2n
/// grid. No band truncation is applied to the result.
SpectralField nonlinear_term(const SpectralField& theta);

/// Two-stage exponential time differencing (ETD2) integrator:
///   a        = E theta + phi1 N(theta)
///   theta'   = a + phi2 (N(a) - N(theta))
/// with E = exp(z), phi1 = dt (e^z - 1)/z, phi2 = dt (e^z - 1 - z)/z^2 and
/// z = -dt (2 pi |j|)^gamma. The state is kept inside the 2/3-rule band.
class Stepper {
 public:
  explicit Stepper(const SolverConfig& config);
  ~Stepper();
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  /// Advances by h (<= config.dt is not enforced here). Throws DivergedError.
  void advance(SimulationState& state, double h);

  /// N(theta) restricted to the retained band, or zero in linear-only mode.
  void evaluate_nonlinear(std::span<const Complex> theta, std::span<Complex> out);

  const SolverConfig& config() const { return config_; }

 private:
  struct Workspace;
  SolverConfig config_;
  std::unique_ptr<Workspace> ws_;
};

/// One step of size dt from `state`.
SimulationState step(const SimulationState& state, double dt, const SolverConfig& config);

struct CflEstimate {
  double max_velocity;
  double advective;    ///< c * h / max|u|
  double dissipative;  ///< c * (2 pi)^-gamma, e-folding time of the slowest mode
  double dt;
};

inline constexpr double kCflSafety = 0.5;

CflEstimate cfl_estimate(const SimulationState& state, const SolverConfig& config);
/// config.dt when u == 0, else min(advective, dissipative).
double cfl_dt(const SimulationState& state, const SolverConfig& config);

/// Which quantities a trajectory records at each sample.
struct NormSpec {
  std::vector<double> sobolev_orders;
  double analyticity_t0 = 0.0;
};

/// Sampled time series of norms. Columns: l2, linf, hs:<s> per order,
/// grad_linf, y_diag, radius.
class NormTrajectory {
 public:
  NormTrajectory() = default;
  explicit NormTrajectory(std::vector<std::string> columns);

  static std::vector<std::string> columns_for(const NormSpec& spec);
  static std::string sobolev_column(double s);

  /// Times must increase strictly; values must be finite.
  void append(double t, std::span<const double> values);
  /// Appends every row of `other` (same columns, later times).
  void extend(const NormTrajectory& other);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& columns() const { return columns_; }
  bool has_column(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const;
  const std::vector<double>& sobolev(double s) const { return column(sobolev_column(s)); }

 private:
  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<std::vector<double>> data_;
};

/// Row of norms in the column order of NormTrajectory::columns_for(spec).
std::vector<double> evaluate_norms(const SpectralField& theta, double t, const NormSpec& spec);

struct IntegrationResult {
  SimulationState final_state;
  NormTrajectory trajectory;
};

using SampleObserver = std::function<void(const SimulationState&)>;

/// Evolves theta0 from t = 0 to config.t_end, sampling at `sample_times`
/// (strictly increasing, inside [0, t_end]). Steps are shortened to land
/// exactly on sample times. Checks config.dt against cfl_dt at startup.
IntegrationResult integrate(const SolverConfig& config, const SpectralField& theta0,
                            std::span<const double> sample_times, const NormSpec& norms,
                            const SampleObserver& observer = {});

/// Continues from an existing state up to config.t_end.
IntegrationResult integrate_from(const SolverConfig& config, SimulationState state,
                                 std::span<const double> sample_times, const NormSpec& norms,
                                 const SampleObserver& observer = {});

}  // namespace sqg
