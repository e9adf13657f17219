#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sqg/fields.hpp"

namespace sqg {

/// Smooth radial cutoff chi and the dyadic bump phi_hat(r) = chi(r) - chi(2r).
///
/// chi(r) = h(2-r) / (h(2-r) + h(r-1)) with h(s) = exp(-1/s) for s > 0.
/// chi = 1 on [0,1], chi = 0 on [2,inf), so supp phi_hat = [1/2, 2] and
/// sum_k phi_hat(2^-k r) = 1 for every r > 0.
struct DyadicBump {
  static double chi(double r);
  static double phi_hat(double r);
};

/// Dyadic indices whose bands meet the resolved wavevectors of a grid.
///
/// Band j is supported on 2 pi |k| in [2^{j-1}, 2^{j+1}]. The range spans
/// every nonzero non-Nyquist lattice mode of the grid.
struct BandRange {
  int j_min;
  int j_max;

  static BandRange for_grid(const TorusGrid& grid);
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  int count() const { return j_max - j_min + 1; }
};

enum class Projection {
  delta,  ///< Delta_j
  low,    ///< S_j = sum_{k <= j-3} Delta_k
  tilde,  ///< sum_{|k-j| <= 1} Delta_k
  check,  ///< sum_{|k-j| <= 2} Delta_k
};

/// Radial symbol of a projection evaluated at wavevector magnitude xi > 0.
double projection_symbol(Projection kind, int j, double xi);

/// Applies a Littlewood-Paley projection. The mean and Nyquist modes are
/// always removed. Indices outside the grid's BandRange give the zero field.
SpectralField lp_project(const SpectralField& v, int j, Projection kind);

/// Exact coefficients of f*g on every non-Nyquist mode of the grid, from
/// products evaluated on a 2n grid. Nyquist modes of the inputs are ignored.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// sum_i f_i * g_i accumulated in physical space with one forward transform.
SpectralField dealiased_product_sum(
    std::span<const std::pair<const SpectralField*, const SpectralField*>> terms);

/// Bony decomposition fg = T_f g + T_g f + R(f, g), modulo the mean mode.
struct BonyDecomposition {
  SpectralField paraproduct_fg;  ///< T_f g = sum_j S_j f Delta_j g
  SpectralField paraproduct_gf;  ///< T_g f
  SpectralField remainder;       ///< R(f,g) = sum_{|i-j|<=2} Delta_i f Delta_j g
};
BonyDecomposition bony_paraproducts(const SpectralField& f, const SpectralField& g);

/// [f, Delta_j] g = f Delta_j g - Delta_j(f g), optionally followed by the
/// localizing projection sum_{|k-j|<=1} Delta_k.
SpectralField commutator(const SpectralField& f, int j, const SpectralField& g, bool localized);

/// Same as commutator() but reuses a precomputed dealiased product f*g.
SpectralField commutator_with_product(const SpectralField& f, int j, const SpectralField& g,
                                      const SpectralField& fg, bool localized);

/// Square-function norm || (sum_k |2^{ks} Delta_k v|^2)^{1/2} ||_{L^p} over the
/// active bands, evaluated by grid averaging on a 2n grid.
double square_function_norm(const SpectralField& v, double s, double p);

/// sum_j Delta_j v over the active bands.
SpectralField lp_reconstruct(const SpectralField& v);

}  // namespace sqg
