#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/spectral_ops.hpp"
#include "test_support.hpp"

namespace sqg {
namespace {

using test::kTwoPi;

TEST(Grid, RejectsSmallOrOddSizes) {
  EXPECT_THROW(TorusGrid(6), InvalidArgument);
  EXPECT_THROW(TorusGrid(9), InvalidArgument);
  EXPECT_NO_THROW(TorusGrid(8));
}

TEST(Grid, FrequencyTablesCoverTheLattice) {
  const TorusGrid g(8);
  EXPECT_EQ(g.freq_of_row(3), 3);
  EXPECT_EQ(g.freq_of_row(4), -4);
  EXPECT_EQ(g.freq_of_row(7), -1);
  EXPECT_EQ(g.row_of_freq(-1), 7);
  EXPECT_TRUE(g.is_nyquist(4, 0));
  EXPECT_TRUE(g.is_nyquist(0, 4));
  EXPECT_FALSE(g.is_nyquist(3, 3));
}

TEST(Transform, ZeroFieldStaysZero) {
  const PhysicalField zero{TorusGrid(16)};
  const SpectralField F = forward_transform(zero);
  EXPECT_EQ(F.max_abs(), 0.0);
  const PhysicalField back = inverse_transform(F);
  for (double x : back.values()) EXPECT_EQ(x, 0.0);
}

TEST(Transform, SineHasTwoCoefficients) {
  const int n = 16;
  const auto f = PhysicalField::from_function(TorusGrid(n),
                                              [](double x1, double) { return std::sin(kTwoPi * x1); });
  const SpectralField F = forward_transform(f);
  EXPECT_NEAR(std::abs(F.mode(1, 0) - Complex(0, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(F.mode(-1, 0) - Complex(0, 0.5)), 0.0, 1e-15);
  double rest = 0.0;
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      if (k2 == 0 && std::abs(k1) == 1) continue;
      rest = std::max(rest, std::abs(F.mode(k1, k2)));
    }
  }
  EXPECT_LT(rest, 1e-16);
}

TEST(Transform, MatchesDirectDft) {
  for (int n : {8, 12}) {
    const PhysicalField f = test::random_physical(n, 7 + n);
    const SpectralField F = forward_transform(f);
    double err = 0.0;
    double scale = 0.0;
    for (int k1 = -n / 2; k1 < n / 2; ++k1) {
      for (int k2 = -n / 2; k2 < n / 2; ++k2) {
        const Complex ref = test::direct_dft(f, k1, k2);
        err = std::max(err, std::abs(F.mode(k1, k2) - ref));
        scale = std::max(scale, std::abs(ref));
      }
    }
    EXPECT_LT(err, 1e-12 * scale) << "n=" << n;
  }
}

TEST(Transform, RoundTripIsIdentity) {
  for (int n : {8, 64, 256}) {
    const PhysicalField f = test::random_physical(n, 100 + n);
    const PhysicalField back = inverse_transform(forward_transform(f));
    double amp = 0.0;
    for (double x : f.values()) amp = std::max(amp, std::abs(x));
    EXPECT_LT(test::max_abs_diff(f.values(), back.values()), 1e-12 * amp) << "n=" << n;
  }
}

TEST(Transform, ParsevalIncludingNyquist) {
  const auto tables = SpectralTables::get(32);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PhysicalField f = test::random_physical(32, seed);
    const SpectralField F = forward_transform(f);
    double physical = 0.0;
    for (double x : f.values()) physical += x * x;
    physical /= 32.0 * 32.0;
    double spectral = 0.0;
    for (std::size_t i = 0; i < F.coeffs().size(); ++i) {
      spectral += tables->multiplicity[i] * std::norm(F.coeffs()[i]);
    }
    ASSERT_NEAR(spectral / physical, 1.0, 1e-12) << "seed " << seed;
  }
}

TEST(Transform, RejectsNonFiniteSamples) {
  PhysicalField f = test::random_physical(8, 1);
  f.values()[5] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(forward_transform(f), NonFiniteError);
}

TEST(Transform, InverseRejectsAsymmetricSelfConjugateColumn) {
  SpectralField F{TorusGrid(8)};
  F.coeffs()[F.grid().index(1, 0)] = Complex(1.0, 0.0);  // partner at row 7 left at zero
  EXPECT_GT(hermitian_defect(F), 0.5);
  EXPECT_THROW(inverse_transform(F), SymmetryError);
}

TEST(Transform, PaddedSynthesisAndTruncatedAnalysisInvert) {
  const SpectralField F = test::random_spectral(16, 3);
  std::vector<double> samples(32 * 32);
  fft::synthesize_padded(F.coeffs(), 16, 32, samples);
  ComplexBuffer back(F.coeffs().size());
  fft::analyze_truncated(samples, 32, 16, back);
  EXPECT_LT(test::max_abs_diff(F, SpectralField(F.grid(), back)), 1e-15);
}

TEST(FractionalPower, ZeroOrderIsIdentityOnMeanZeroFields) {
  const SpectralField F = test::random_spectral(32, 4);
  EXPECT_LT(test::max_abs_diff(apply_fractional_power(F, 0.0), F), 1e-18);
}

TEST(FractionalPower, SineIsAnEigenfunctionOfMinusLaplacian) {
  const SpectralField F = test::sine_mode(32, 1, 0);
  const SpectralField L = apply_fractional_power(F, 2.0);
  EXPECT_LT(test::max_abs_diff(L, F * (kTwoPi * kTwoPi)), 1e-14);
}

TEST(FractionalPower, ComposesAdditively) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpectralField F = test::random_spectral(64, seed);
    const SpectralField twice = apply_fractional_power(apply_fractional_power(F, 0.5), 0.5);
    const SpectralField once = apply_fractional_power(F, 1.0);
    EXPECT_LT(test::max_abs_diff(twice, once), 1e-12 * once.max_abs());
    const SpectralField mixed = apply_fractional_power(apply_fractional_power(F, 1.3), -0.4);
    EXPECT_LT(test::max_abs_diff(mixed, apply_fractional_power(F, 0.9)), 1e-12 * F.max_abs() * 100);
    const SpectralField inverse = apply_fractional_power(apply_fractional_power(F, 0.7), -0.7);
    EXPECT_LT(test::max_abs_diff(inverse, F), 1e-12 * F.max_abs());
  }
}

TEST(FractionalPower, NegativeOrderRequiresZeroMean) {
  SpectralField F = test::random_spectral(16, 1);
  F.coeffs()[0] = Complex(1.0, 0.0);
  EXPECT_THROW(apply_fractional_power(F, -0.5), InvalidArgument);
  EXPECT_NO_THROW(apply_fractional_power(F, 0.5));
  EXPECT_EQ(apply_fractional_power(F, 0.5).mean(), Complex{});
}

TEST(Riesz, SingleModeVelocities) {
  const int n = 16;
  // sin(2 pi x1) -> u = (0, cos(2 pi x1))
  const Velocity a = riesz_velocity(test::sine_mode(n, 1, 0));
  EXPECT_LT(a.u1.max_abs(), 1e-17);
  EXPECT_NEAR(std::abs(a.u2.mode(1, 0) - Complex(0.5, 0.0)), 0.0, 1e-16);
  // sin(2 pi x2) -> u = (-cos(2 pi x2), 0)
  const Velocity b = riesz_velocity(test::sine_mode(n, 0, 1));
  EXPECT_NEAR(std::abs(b.u1.mode(0, 1) - Complex(-0.5, 0.0)), 0.0, 1e-16);
  EXPECT_LT(b.u2.max_abs(), 1e-17);
}

TEST(Riesz, DivergenceFreeIsometryPerMode) {
  const int n = 64;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SpectralField theta = test::random_spectral(n, seed, 0.5);
    const Velocity u = riesz_velocity(theta);
    const TorusGrid& g = theta.grid();
    double div = 0.0;
    double iso = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < g.half_cols(); ++c) {
        if (g.is_nyquist(r, c) || (r == 0 && c == 0)) continue;
        const double k1 = g.freq_of_row(r);
        const double k2 = g.freq_of_col(c);
        const Complex u1 = u.u1.at(r, c);
        const Complex u2 = u.u2.at(r, c);
        div = std::max(div, std::abs(k1 * u1 + k2 * u2));
        const double m = std::abs(theta.at(r, c));
        iso = std::max(iso, std::abs(std::sqrt(std::norm(u1) + std::norm(u2)) - m));
      }
    }
    ASSERT_LT(div, 1e-13 * theta.max_abs()) << "seed " << seed;
    ASSERT_LT(iso, 1e-15 * theta.max_abs() * 10) << "seed " << seed;
    ASSERT_EQ(u.u1.mean(), Complex{});
  }
}

TEST(Riesz, RejectsNonzeroMean) {
  SpectralField theta = test::random_spectral(16, 2);
  theta.coeffs()[0] = Complex(0.1, 0.0);
  EXPECT_THROW(riesz_velocity(theta), InvalidArgument);
}

TEST(SobolevNorm, SineValues) {
  const SpectralField F = test::sine_mode(32, 1, 0);
  EXPECT_NEAR(sobolev_norm(F, 0.0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(sobolev_norm(F, 1.0), kTwoPi * std::sqrt(0.5), 1e-13);
}

TEST(SobolevNorm, ZeroOrderMatchesGridL2) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SpectralField F = test::random_spectral(32, seed);
    const double l2 = lp_norm(inverse_transform(F), 2.0);
    ASSERT_NEAR(sobolev_norm(F, 0.0) / l2, 1.0, 1e-12) << "seed " << seed;
  }
}

TEST(SobolevNorm, FirstOrderMatchesGradient) {
  const SpectralField F = test::random_spectral(64, 11);
  const auto grad = gradient(F);
  const double g1 = lp_norm(inverse_transform(grad[0]), 2.0);
  const double g2 = lp_norm(inverse_transform(grad[1]), 2.0);
  EXPECT_NEAR(sobolev_norm(F, 1.0) / std::hypot(g1, g2), 1.0, 1e-12);
}

TEST(SobolevNorm, MonotoneInOrder) {
  const SpectralField F = test::random_spectral(32, 5);
  double prev = 0.0;
  for (double s = 0.0; s <= 3.0; s += 0.25) {
    const double v = sobolev_norm(F, s);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(LpNorm, SineValuesAndHolderOrder) {
  const auto f = PhysicalField::from_function(TorusGrid(16),
                                              [](double x1, double) { return std::sin(kTwoPi * x1); });
  EXPECT_NEAR(lp_norm(f, kInfinity), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(lp_norm(f, 2.0), sobolev_norm(forward_transform(f), 0.0), 1e-12);
  const PhysicalField r = test::random_physical(32, 9);
  EXPECT_LE(lp_norm(r, 1.0), lp_norm(r, 2.0));
  EXPECT_LE(lp_norm(r, 2.0), lp_norm(r, kInfinity));
  EXPECT_THROW(lp_norm(r, 0.5), InvalidArgument);
  EXPECT_EQ(lp_norm(PhysicalField{TorusGrid(8)}, 3.0), 0.0);
}

TEST(Analyticity, UnitShellClosedForm) {
  SpectralField F{TorusGrid(32)};
  F.set_mode(1, 0, Complex(0.3, 0.0));
  F.set_mode(0, 1, Complex(0.0, 0.2));
  const double wiener = 2.0 * (0.3 + 0.2);
  EXPECT_NEAR(analyticity_sum(F, 1.0, 0.0), wiener * std::exp(0.5), 1e-14);
  EXPECT_NEAR(analyticity_sum(F, 0.7, 0.7), wiener, 1e-15);
  EXPECT_THROW(analyticity_radius(F), UnresolvedSpectrum);
}

TEST(Analyticity, WienerNormAtReferenceTime) {
  const SpectralField F = test::random_spectral(32, 2, 2.0);
  double wiener = 0.0;
  for (int k1 = -15; k1 <= 15; ++k1) {
    for (int k2 = -15; k2 <= 15; ++k2) wiener += std::abs(F.mode(k1, k2));
  }
  EXPECT_NEAR(analyticity_sum(F, 0.3, 0.3) / wiener, 1.0, 1e-12);
}

TEST(Analyticity, RadiusOfExponentialEnvelope) {
  const int n = 128;
  const double rho = 0.8;
  SpectralField F{TorusGrid(n)};
  for (int k1 = -n / 2 + 1; k1 < n / 2; ++k1) {
    for (int k2 = 0; k2 < n / 2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      F.set_mode(k1, k2, std::exp(-rho * std::hypot(k1, k2)));
    }
  }
  EXPECT_NEAR(analyticity_radius(F), rho, 0.05);
  EXPECT_GE(analyticity_diagnostics(F, 0.0, 0.0).y, 0.0);
}

TEST(TwoThirds, KeepsOnlyTheRetainedBand) {
  const SpectralField F = truncate_two_thirds(test::random_spectral(48, 1, 0.0));
  for (int k1 = -24; k1 < 24; ++k1) {
    for (int k2 = -24; k2 < 24; ++k2) {
      if (std::abs(k1) > 16 || std::abs(k2) > 16 || k1 == -24 || k2 == -24) {
        ASSERT_EQ(F.mode(k1, k2), Complex{}) << k1 << "," << k2;
      }
    }
  }
  EXPECT_NE(F.mode(16, -16), Complex{});
}

}  // namespace
}  // namespace sqg
