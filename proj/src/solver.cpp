#include "sqg/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

namespace {

// Late in a decaying run the high modes underflow; denormal arithmetic in the
// transforms is orders of magnitude slower, so flush them on this thread.
class FlushDenormals {
 public:
  FlushDenormals() {
#if defined(__SSE2__)
    saved_ = _mm_getcsr();
    _mm_setcsr(saved_ | 0x8040);  // FTZ | DAZ
#endif
  }
  ~FlushDenormals() {
#if defined(__SSE2__)
    _mm_setcsr(saved_);
#endif
  }
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned int saved_ = 0;
};

double decay_factor(double wavevector, double gamma, double t) {
  return std::exp(-t * std::pow(wavevector, gamma));
}

constexpr double kSeriesThreshold = 1e-4;

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2.
void phi_functions(double z, double& phi1, double& phi2) {
  if (std::abs(z) < kSeriesThreshold) {
    phi1 = 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z / 720))));
    phi2 = 1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z / 5040))));
    return;
  }
  const double em1 = std::expm1(z);
  phi1 = em1 / z;
  phi2 = (em1 - z) / (z * z);
}

bool all_finite(std::span<const Complex> c) {
  for (const Complex& x : c) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 2.0)) {
    throw InvalidArgument("gamma must lie in (0, 2], got " + std::to_string(gamma));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("dt must be positive, got " + std::to_string(dt));
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("t_end must be >= 0, got " + std::to_string(t_end));
  }
  TorusGrid check(n);
  (void)check;
}

SpectralField semigroup_apply(const SpectralField& theta, double gamma, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup_apply: t must be >= 0");
  if (!(gamma > 0.0)) throw InvalidArgument("semigroup_apply: gamma must be > 0");
  const auto tables = SpectralTables::get(theta.grid().n());
  std::vector<double> symbol(tables->wavevector.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    symbol[i] = tables->nyquist[i] ? 0.0 : decay_factor(tables->wavevector[i], gamma, t);
  }
  ComplexBuffer out(theta.coeffs().size());
  kernels::omp::scale_into(theta.coeffs(), symbol, out);
  return SpectralField(theta.grid(), std::move(out));
}

struct Stepper::Workspace {
  explicit Workspace(int n)
      : tables(SpectralTables::get(n)),
        m(fft::padded_size(n)),
        spectral(static_cast<std::size_t>(n) * (n / 2 + 1)),
        physical(static_cast<std::size_t>(m) * m),
        u1(spectral),
        u2(spectral),
        flux1(spectral),
        flux2(spectral),
        n_theta(spectral),
        n_pred(spectral),
        predicted(spectral),
        theta_x(physical),
        u1_x(physical),
        u2_x(physical),
        prod_x(physical),
        inv_norm(spectral),
        retained(spectral) {
    for (std::size_t i = 0; i < spectral; ++i) {
      const double r = tables->lattice_norm[i];
      inv_norm[i] = (r == 0.0 || tables->nyquist[i]) ? 0.0 : 1.0 / r;
      retained[i] = tables->retained[i] ? 1.0 : 0.0;
    }
  }

  std::shared_ptr<const SpectralTables> tables;
  int m;
  std::size_t spectral;
  std::size_t physical;
  ComplexBuffer u1, u2, flux1, flux2, n_theta, n_pred, predicted;
  RealBuffer theta_x, u1_x, u2_x, prod_x;
  std::vector<double> inv_norm;
  std::vector<double> retained;

  double weights_dt = -1.0;
  std::vector<double> decay, phi1, phi2;
};

Stepper::Stepper(const SolverConfig& config) : config_(config) {
  config_.validate();
  ws_ = std::make_unique<Workspace>(config_.n);
}

Stepper::~Stepper() = default;

void Stepper::evaluate_nonlinear(std::span<const Complex> theta, std::span<Complex> out) {
  Workspace& w = *ws_;
  if (config_.linear_only) {
    std::fill(out.begin(), out.end(), Complex{});
    return;
  }
  const int n = config_.n;
  const kernels::HalfLayout layout{n, n / 2 + 1, w.tables->k1, w.tables->k2};
  kernels::omp::riesz(layout, w.inv_norm, theta, w.u1, w.u2);
  fft::synthesize_padded(theta, n, w.m, w.theta_x);
  fft::synthesize_padded(w.u1, n, w.m, w.u1_x);
  fft::synthesize_padded(w.u2, n, w.m, w.u2_x);
  kernels::omp::product(w.u1_x, w.theta_x, w.prod_x);
  fft::analyze_truncated(w.prod_x, w.m, n, w.flux1);
  kernels::omp::product(w.u2_x, w.theta_x, w.prod_x);
  fft::analyze_truncated(w.prod_x, w.m, n, w.flux2);
  kernels::omp::neg_divergence(layout, w.flux1, w.flux2, out);
  kernels::omp::scale(out, w.retained);
}

void Stepper::advance(SimulationState& state, double h) {
  if (!(h > 0.0)) throw InvalidArgument("step size must be positive");
  FlushDenormals guard;
  Workspace& w = *ws_;
  if (h != w.weights_dt) {
    w.decay.resize(w.spectral);
    w.phi1.resize(w.spectral);
    w.phi2.resize(w.spectral);
    for (std::size_t i = 0; i < w.spectral; ++i) {
      if (!w.retained[i]) {
        w.decay[i] = w.phi1[i] = w.phi2[i] = 0.0;
        continue;
      }
      const double rate = std::pow(w.tables->wavevector[i], config_.gamma);
      const double z = -h * rate;
      double p1 = 0.0;
      double p2 = 0.0;
      phi_functions(z, p1, p2);
      w.decay[i] = decay_factor(w.tables->wavevector[i], config_.gamma, h);
      w.phi1[i] = h * p1;
      w.phi2[i] = h * p2;
    }
    w.weights_dt = h;
  }
  const kernels::EtdWeights weights{w.decay, w.phi1, w.phi2};
  auto theta = state.theta.coeffs();
  evaluate_nonlinear(theta, w.n_theta);
  kernels::omp::etd_predict(weights, theta, w.n_theta, w.predicted);
  evaluate_nonlinear(w.predicted, w.n_pred);
  kernels::omp::etd_correct(weights, w.predicted, w.n_pred, w.n_theta, theta);
  ++state.step_count;
  state.t += h;
  if (!all_finite(theta)) throw DivergedError(state.step_count, state.t);
}

SimulationState step(const SimulationState& state, double dt, const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.n = state.theta.grid().n();
  Stepper stepper(cfg);
  SimulationState next = state;
  stepper.advance(next, dt);
  return next;
}

SpectralField nonlinear_term(const SpectralField& theta) {
  require_zero_mean(theta, "nonlinear_term");
  const Velocity u = riesz_velocity(theta);
  const int n = theta.grid().n();
  const int m = fft::padded_size(n);
  const std::size_t size = static_cast<std::size_t>(m) * m;
  RealBuffer a(size), b(size), prod(size);
  ComplexBuffer f1(theta.grid().spectral_size()), f2(theta.grid().spectral_size());
  fft::synthesize_padded(theta.coeffs(), n, m, a);
  fft::synthesize_padded(u.u1.coeffs(), n, m, b);
  kernels::omp::product(a, b, prod);
  fft::analyze_truncated(prod, m, n, f1);
  fft::synthesize_padded(u.u2.coeffs(), n, m, b);
  kernels::omp::product(a, b, prod);
  fft::analyze_truncated(prod, m, n, f2);
  const auto tables = SpectralTables::get(n);
  ComplexBuffer out(theta.grid().spectral_size());
  kernels::omp::neg_divergence({n, n / 2 + 1, tables->k1, tables->k2}, f1, f2, out);
  return SpectralField(theta.grid(), std::move(out));
}

CflEstimate cfl_estimate(const SimulationState& state, const SolverConfig& config) {
  CflEstimate est{};
  const double inf = std::numeric_limits<double>::infinity();
  if (!config.linear_only) {
    const Velocity u = riesz_velocity(state.theta);
    const PhysicalField u1 = inverse_transform(u.u1);
    const PhysicalField u2 = inverse_transform(u.u2);
    double vmax = 0.0;
    const auto a = u1.values();
    const auto b = u2.values();
    for (std::size_t i = 0; i < a.size(); ++i) vmax = std::max(vmax, std::hypot(a[i], b[i]));
    est.max_velocity = vmax;
  }
  est.advective = est.max_velocity > 0.0
                      ? kCflSafety * state.theta.grid().spacing() / est.max_velocity
                      : inf;
  est.dissipative = kCflSafety * std::pow(2.0 * std::numbers::pi, -config.gamma);
  est.dt = est.max_velocity > 0.0 ? std::min(est.advective, est.dissipative) : config.dt;
  return est;
}

double cfl_dt(const SimulationState& state, const SolverConfig& config) {
  return cfl_estimate(state, config).dt;
}

NormTrajectory::NormTrajectory(std::vector<std::string> columns)
    : columns_(std::move(columns)), data_(columns_.size()) {}

std::string NormTrajectory::sobolev_column(double s) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), s);
  return "hs:" + std::string(buf, res.ptr);
}

std::vector<std::string> NormTrajectory::columns_for(const NormSpec& spec) {
  std::vector<std::string> cols{"l2", "linf"};
  for (double s : spec.sobolev_orders) cols.push_back(sobolev_column(s));
  cols.insert(cols.end(), {"grad_linf", "y_diag", "radius"});
  return cols;
}

void NormTrajectory::append(double t, std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw InvalidArgument("trajectory row has " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(columns_.size()));
  }
  if (!times_.empty() && !(t > times_.back())) {
    throw InvalidArgument("trajectory times must increase strictly");
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!std::isfinite(values[c])) {
      throw NonFiniteError("trajectory column '" + columns_[c] + "' is not finite at t = " +
                           std::to_string(t));
    }
  }
  times_.push_back(t);
  for (std::size_t c = 0; c < values.size(); ++c) data_[c].push_back(values[c]);
}

void NormTrajectory::extend(const NormTrajectory& other) {
  if (columns_.empty() && times_.empty()) {
    *this = other;
    return;
  }
  if (other.columns_ != columns_) throw InvalidArgument("trajectory column sets differ");
  std::vector<double> row(columns_.size());
  for (std::size_t r = 0; r < other.size(); ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) row[c] = other.data_[c][r];
    append(other.times_[r], row);
  }
}

bool NormTrajectory::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

const std::vector<double>& NormTrajectory::column(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) {
    throw InvalidArgument("trajectory has no column '" + std::string(name) + "'");
  }
  return data_[static_cast<std::size_t>(it - columns_.begin())];
}

std::vector<double> evaluate_norms(const SpectralField& theta, double t, const NormSpec& spec) {
  std::vector<double> row;
  row.reserve(spec.sobolev_orders.size() + 5);
  row.push_back(sobolev_norm(theta, 0.0));
  row.push_back(lp_norm(inverse_transform(theta), kInfinity));
  for (double s : spec.sobolev_orders) row.push_back(sobolev_norm(theta, s));
  const auto grad = gradient(theta);
  const PhysicalField g1 = inverse_transform(grad[0]);
  const PhysicalField g2 = inverse_transform(grad[1]);
  double gmax = 0.0;
  for (std::size_t i = 0; i < g1.values().size(); ++i) {
    gmax = std::max(gmax, std::hypot(g1.values()[i], g2.values()[i]));
  }
  row.push_back(gmax);
  row.push_back(analyticity_sum(theta, t, spec.analyticity_t0));
  double radius = 0.0;
  try {
    radius = analyticity_radius(theta);
  } catch (const UnresolvedSpectrum&) {
    // Zero or single-shell fields carry no decay rate.
  }
  row.push_back(radius);
  return row;
}

IntegrationResult integrate_from(const SolverConfig& config, SimulationState state,
                                 std::span<const double> sample_times, const NormSpec& norms,
                                 const SampleObserver& observer) {
  config.validate();
  if (state.theta.grid().n() != config.n) {
    throw InvalidArgument("initial field grid (n = " + std::to_string(state.theta.grid().n()) +
                          ") does not match config n = " + std::to_string(config.n));
  }
  require_zero_mean(state.theta, "integrate");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double ts = sample_times[i];
    if (ts < state.t || ts > config.t_end) {
      throw InvalidArgument("sample time " + std::to_string(ts) + " outside [" +
                            std::to_string(state.t) + ", " + std::to_string(config.t_end) + "]");
    }
    if (i > 0 && !(ts > sample_times[i - 1])) {
      throw InvalidArgument("sample times must increase strictly");
    }
  }
  state.theta = truncate_two_thirds(state.theta);
  const double limit = cfl_dt(state, config);
  if (config.dt > limit * (1.0 + 1e-12)) {
    throw InvalidArgument("dt = " + std::to_string(config.dt) + " exceeds the CFL bound " +
                          std::to_string(limit));
  }

  Stepper stepper(config);
  NormTrajectory trajectory(NormTrajectory::columns_for(norms));
  const double eps = 1e-12 * config.dt;
  auto advance_to = [&](double target) {
    while (target - state.t > eps) {
      const double remaining = target - state.t;
      const bool last = remaining <= config.dt * (1.0 + 1e-9);
      stepper.advance(state, last ? remaining : config.dt);
      if (last) state.t = target;
    }
    state.t = std::max(state.t, target);
  };
  for (double ts : sample_times) {
    advance_to(ts);
    state.t = ts;
    trajectory.append(ts, evaluate_norms(state.theta, ts, norms));
    if (observer) observer(state);
  }
  advance_to(config.t_end);
  return {std::move(state), std::move(trajectory)};
}

IntegrationResult integrate(const SolverConfig& config, const SpectralField& theta0,
                            std::span<const double> sample_times, const NormSpec& norms,
                            const SampleObserver& observer) {
  return integrate_from(config, SimulationState{0.0, theta0, 0}, sample_times, norms, observer);
}

}  // namespace sqg
