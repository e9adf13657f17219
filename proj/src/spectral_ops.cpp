#include "sqg/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sqg/errors.hpp"
#include "sqg/kernels.hpp"

namespace sqg {

namespace {

kernels::HalfLayout layout_of(const SpectralTables& t) {
  return {t.grid.n(), t.grid.half_cols(), t.k1, t.k2};
}

}  // namespace

void require_zero_mean(const SpectralField& F, const char* what, double tol) {
  const double scale = std::max(F.max_abs(), std::numeric_limits<double>::min());
  if (std::abs(F.mean()) > tol * scale) {
    throw InvalidArgument(std::string(what) + ": field must have zero mean (mean = " +
                          std::to_string(std::abs(F.mean())) + ")");
  }
}

SpectralField apply_fractional_power(const SpectralField& F, double s) {
  if (s < 0.0) require_zero_mean(F, "apply_fractional_power");
  const auto tables = SpectralTables::get(F.grid().n());
  std::vector<double> symbol(tables->wavevector.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const double k = tables->wavevector[i];
    symbol[i] = (k == 0.0 || tables->nyquist[i]) ? 0.0 : std::pow(k, s);
  }
  ComplexBuffer out(F.coeffs().size());
  kernels::omp::scale_into(F.coeffs(), symbol, out);
  return SpectralField(F.grid(), std::move(out));
}

Velocity riesz_velocity(const SpectralField& theta) {
  require_zero_mean(theta, "riesz_velocity");
  const auto tables = SpectralTables::get(theta.grid().n());
  std::vector<double> inv_norm(tables->lattice_norm.size());
  for (std::size_t i = 0; i < inv_norm.size(); ++i) {
    const double r = tables->lattice_norm[i];
    inv_norm[i] = (r == 0.0 || tables->nyquist[i]) ? 0.0 : 1.0 / r;
  }
  ComplexBuffer u1(theta.coeffs().size());
  ComplexBuffer u2(theta.coeffs().size());
  kernels::omp::riesz(layout_of(*tables), inv_norm, theta.coeffs(), u1, u2);
  return {SpectralField(theta.grid(), std::move(u1)), SpectralField(theta.grid(), std::move(u2))};
}

std::array<SpectralField, 2> gradient(const SpectralField& F) {
  const auto tables = SpectralTables::get(F.grid().n());
  const TorusGrid& grid = F.grid();
  SpectralField d1(grid);
  SpectralField d2(grid);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int r = 0; r < grid.n(); ++r) {
    for (int c = 0; c < grid.half_cols(); ++c) {
      if (grid.is_nyquist(r, c)) continue;
      const std::size_t i = grid.index(r, c);
      const Complex ic(-F.coeffs()[i].imag(), F.coeffs()[i].real());
      d1.coeffs()[i] = two_pi * tables->k1[r] * ic;
      d2.coeffs()[i] = two_pi * tables->k2[c] * ic;
    }
  }
  return {std::move(d1), std::move(d2)};
}

double sobolev_norm(const SpectralField& F, double s) {
  if (s < 0.0) require_zero_mean(F, "sobolev_norm");
  const auto tables = SpectralTables::get(F.grid().n());
  if (s == 0.0) return std::sqrt(kernels::omp::weighted_sum_sq(F.coeffs(), tables->multiplicity));
  std::vector<double> weight(tables->wavevector.size());
  for (std::size_t i = 0; i < weight.size(); ++i) {
    const double k = tables->wavevector[i];
    weight[i] = k == 0.0 ? 0.0 : tables->multiplicity[i] * std::pow(k, 2.0 * s);
  }
  return std::sqrt(kernels::omp::weighted_sum_sq(F.coeffs(), weight));
}

double lp_norm(const PhysicalField& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1, got " + std::to_string(p));
  if (std::isinf(p)) return kernels::omp::max_abs(f.values());
  const double mean = kernels::omp::sum_abs_pow(f.values(), p) /
                      static_cast<double>(f.values().size());
  return std::pow(mean, 1.0 / p);
}

double analyticity_sum(const SpectralField& theta, double t, double t0) {
  const auto tables = SpectralTables::get(theta.grid().n());
  const double floor = kNoiseFloorFactor * std::numeric_limits<double>::epsilon() * theta.max_abs();
  double y = 0.0;
  const auto coeffs = theta.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double r = tables->lattice_norm[i];
    if (r == 0.0 || tables->nyquist[i]) continue;
    const double a = std::abs(coeffs[i]);
    if (a <= floor || a == 0.0) continue;
    y += tables->multiplicity[i] * std::exp(std::log(a) + 0.5 * (t - t0) * r);
  }
  return y;
}

double analyticity_radius(const SpectralField& theta) {
  const TorusGrid& grid = theta.grid();
  const auto tables = SpectralTables::get(grid.n());
  const int max_shell = grid.n() / 2 - 1;
  std::vector<double> shell_max(max_shell + 1, 0.0);
  const auto coeffs = theta.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (tables->nyquist[i]) continue;
    const auto shell = static_cast<int>(std::lround(tables->lattice_norm[i]));
    if (shell < 1 || shell > max_shell) continue;
    shell_max[shell] = std::max(shell_max[shell], std::abs(coeffs[i]));
  }
  const double floor = kNoiseFloorFactor * std::numeric_limits<double>::epsilon() * theta.max_abs();
  // Contiguous run of above-floor shells starting at the first resolved one.
  std::vector<double> xs;
  std::vector<double> ys;
  for (int r = 1; r <= max_shell; ++r) {
    if (!(shell_max[r] > floor)) {
      if (!xs.empty()) break;
      continue;
    }
    xs.push_back(r);
    ys.push_back(std::log(shell_max[r]));
  }
  if (xs.size() < 2) {
    throw UnresolvedSpectrum("analyticity_radius: fewer than two shells above the noise floor");
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -sxy / sxx;
}

AnalyticityDiagnostics analyticity_diagnostics(const SpectralField& theta, double t, double t0) {
  require_zero_mean(theta, "analyticity_diagnostics");
  return {analyticity_sum(theta, t, t0), analyticity_radius(theta)};
}

SpectralField truncate_two_thirds(const SpectralField& F) {
  const auto tables = SpectralTables::get(F.grid().n());
  SpectralField out = F;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!tables->retained[i]) c[i] = Complex{};
  }
  return out;
}

}  // namespace sqg
