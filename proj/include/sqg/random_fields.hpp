#pragma once

#include <cstdint>
#include <limits>

#include "sqg/fields.hpp"

namespace sqg {

/// Counter-based uniform variate in [0, 1) attached to a lattice mode.
///
/// The value depends only on (seed, k1, k2, stream), never on the grid, so a
/// field drawn on a refined grid agrees with the coarse one on shared modes.
double mode_uniform(std::uint64_t seed, int k1, int k2, int stream);

/// Complex Gaussian coefficients shaped by |j|^{-alpha}, restricted to
/// |j| <= max_lattice_norm. Real, mean-zero, Nyquist-free.
SpectralField random_field(const TorusGrid& grid, std::uint64_t seed, double alpha,
                           double max_lattice_norm = std::numeric_limits<double>::infinity());

/// Deterministic-magnitude field |c(j)| = amplitude * (1+|j|)^{-(1+sigma)} with
/// uniform random phases. Real, mean-zero, Nyquist-free.
SpectralField rough_field(const TorusGrid& grid, std::uint64_t seed, double sigma,
                          double amplitude);

}  // namespace sqg
