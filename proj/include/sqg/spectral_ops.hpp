#pragma once

#include <array>
#include <limits>

#include "sqg/fields.hpp"

namespace sqg {

/// Lambda^s = (-Delta)^{s/2}: multiplies c(j) by (2 pi |j|)^s. The mean and
/// the Nyquist modes are set to zero. Negative s requires a mean-zero field.
SpectralField apply_fractional_power(const SpectralField& F, double s);

/// Velocity u = (-R_2 theta, R_1 theta), i.e. u^(j) = i(-j2, j1)/|j| theta^(j).
struct Velocity {
  SpectralField u1;
  SpectralField u2;
};
Velocity riesz_velocity(const SpectralField& theta);

/// Spectral gradient (d/dx1, d/dx2), Nyquist modes zeroed.
std::array<SpectralField, 2> gradient(const SpectralField& F);

/// Homogeneous Sobolev norm (sum_j (2 pi |j|)^{2s} |c(j)|^2)^{1/2}.
/// For s = 0 the mean is included, so the result is the L^2 norm.
double sobolev_norm(const SpectralField& F, double s);

/// Grid-average L^p norm on the unit torus; p = infinity gives max |f|.
double lp_norm(const PhysicalField& f, double p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Shells with max coefficient at or below this multiple of machine epsilon
/// times the field amplitude are treated as roundoff.
inline constexpr double kNoiseFloorFactor = 1e3;

struct AnalyticityDiagnostics {
  double y;       ///< sum_{j != 0} |c(j)| exp((t - t0)|j|/2), above-floor modes
  double radius;  ///< -slope of log max_{shell r} |c| against r
};

/// Both diagnostics use the lattice norm |j| (not 2 pi |j|). Modes at the
/// roundoff floor are excluded from y. Throws UnresolvedSpectrum when fewer
/// than two shells clear the floor.
AnalyticityDiagnostics analyticity_diagnostics(const SpectralField& theta, double t, double t0);
double analyticity_sum(const SpectralField& theta, double t, double t0);
double analyticity_radius(const SpectralField& theta);

/// Keeps only the 2/3-rule band (|j_i| <= n/3, Nyquist excluded).
SpectralField truncate_two_thirds(const SpectralField& F);

void require_zero_mean(const SpectralField& F, const char* what, double tol = 1e-14);

}  // namespace sqg
