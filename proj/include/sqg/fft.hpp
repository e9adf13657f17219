#pragma once

#include <span>

#include "sqg/fields.hpp"

namespace sqg {

/// Normalized analysis: c(j) = n^-2 sum_x f(x) exp(-2 pi i j.x).
/// Throws NonFiniteError on NaN/Inf samples.
SpectralField forward_transform(const PhysicalField& f);

/// Synthesis f(x) = sum_j c(j) exp(2 pi i j.x). Throws SymmetryError if the
/// self-conjugate columns deviate from Hermitian symmetry by more than
/// `symmetry_tol` times the largest coefficient, NonFiniteError on NaN/Inf.
PhysicalField inverse_transform(const SpectralField& F, double symmetry_tol = 1e-10);

/// Largest Hermitian-symmetry defect on the self-conjugate columns.
double hermitian_defect(const SpectralField& F);

namespace fft {

/// Unnormalized r2c on an m x m grid; `out` uses the half layout of grid m.
void r2c(int m, std::span<const double> in, std::span<Complex> out);
/// Unnormalized c2r on an m x m grid. `in` is preserved.
void c2r(int m, std::span<const Complex> in, std::span<double> out);

/// Zero-pads spectral data from grid n onto grid m >= n (Nyquist modes of the
/// source dropped) and synthesizes the m x m samples.
void synthesize_padded(std::span<const Complex> coeffs, int n, int m, std::span<double> out);

/// Analyzes m x m samples and keeps the non-Nyquist modes of grid n <= m,
/// normalized so the result is the coefficient array on grid n.
void analyze_truncated(std::span<const double> samples, int m, int n, std::span<Complex> out);

/// Smallest padded size for products: 2n.
inline int padded_size(int n) { return 2 * n; }

}  // namespace fft
}  // namespace sqg
