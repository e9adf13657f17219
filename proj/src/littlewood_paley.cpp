#include "sqg/littlewood_paley.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"

namespace sqg {

namespace {

double bump_h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Symbol without the BandRange cut, for sums that straddle the range edges.
double raw_symbol(Projection kind, int j, double xi) {
  if (xi <= 0.0) return 0.0;
  auto band = [xi](int k) { return DyadicBump::phi_hat(std::ldexp(xi, -k)); };
  switch (kind) {
    case Projection::delta:
      return band(j);
    case Projection::low:
      // Telescoping: sum_{k <= j-3} phi_hat(2^-k xi) = chi(2^{-(j-3)} xi).
      return DyadicBump::chi(std::ldexp(xi, -(j - 3)));
    case Projection::tilde:
      return band(j - 1) + band(j) + band(j + 1);
    case Projection::check:
      return band(j - 2) + band(j - 1) + band(j) + band(j + 1) + band(j + 2);
  }
  return 0.0;
}

SpectralField project_raw(const SpectralField& v, int j, Projection kind) {
  const auto tables = SpectralTables::get(v.grid().n());
  std::vector<double> symbol(tables->wavevector.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    symbol[i] = tables->nyquist[i] ? 0.0 : raw_symbol(kind, j, tables->wavevector[i]);
  }
  ComplexBuffer out(v.coeffs().size());
  kernels::omp::scale_into(v.coeffs(), symbol, out);
  return SpectralField(v.grid(), std::move(out));
}

RealBuffer synthesize_on(const SpectralField& F, int m) {
  RealBuffer out(static_cast<std::size_t>(m) * m);
  fft::synthesize_padded(F.coeffs(), F.grid().n(), m, out);
  return out;
}

}  // namespace

double DyadicBump::chi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = bump_h(2.0 - r);
  const double b = bump_h(r - 1.0);
  return a / (a + b);
}

double DyadicBump::phi_hat(double r) { return chi(r) - chi(2.0 * r); }

BandRange BandRange::for_grid(const TorusGrid& grid) {
  const double xi_min = 2.0 * std::numbers::pi;
  const double half = grid.n() / 2 - 1;
  const double xi_max = 2.0 * std::numbers::pi * half * std::numbers::sqrt2;
  // Band j meets (0, inf) on the open interval (2^{j-1}, 2^{j+1}).
  int j_min = static_cast<int>(std::floor(std::log2(xi_min))) - 1;
  while (std::ldexp(1.0, j_min + 1) <= xi_min) ++j_min;
  int j_max = j_min;
  while (std::ldexp(1.0, j_max) < xi_max) ++j_max;
  return {j_min, j_max};
}

double projection_symbol(Projection kind, int j, double xi) { return raw_symbol(kind, j, xi); }

SpectralField lp_project(const SpectralField& v, int j, Projection kind) {
  if (!BandRange::for_grid(v.grid()).contains(j)) return SpectralField(v.grid());
  return project_raw(v, j, kind);
}

SpectralField dealiased_product_sum(
    std::span<const std::pair<const SpectralField*, const SpectralField*>> terms) {
  if (terms.empty()) throw InvalidArgument("dealiased_product_sum: no terms");
  const TorusGrid grid = terms.front().first->grid();
  const int n = grid.n();
  const int m = fft::padded_size(n);
  const std::size_t size = static_cast<std::size_t>(m) * m;
  RealBuffer acc(size, 0.0);
  RealBuffer a(size);
  RealBuffer b(size);
  RealBuffer prod(size);
  for (const auto& [f, g] : terms) {
    require_same_grid(grid, f->grid(), "dealiased_product");
    require_same_grid(grid, g->grid(), "dealiased_product");
    fft::synthesize_padded(f->coeffs(), n, m, a);
    fft::synthesize_padded(g->coeffs(), n, m, b);
    kernels::omp::product(a, b, prod);
    for (std::size_t i = 0; i < size; ++i) acc[i] += prod[i];
  }
  ComplexBuffer out(grid.spectral_size());
  fft::analyze_truncated(acc, m, n, out);
  return SpectralField(grid, std::move(out));
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  const std::pair<const SpectralField*, const SpectralField*> term{&f, &g};
  return dealiased_product_sum(std::span(&term, 1));
}

BonyDecomposition bony_paraproducts(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "bony_paraproducts");
  const BandRange range = BandRange::for_grid(f.grid());
  std::vector<SpectralField> low_f, low_g, band_f, band_g, near_g;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    low_f.push_back(project_raw(f, j, Projection::low));
    low_g.push_back(project_raw(g, j, Projection::low));
    band_f.push_back(project_raw(f, j, Projection::delta));
    band_g.push_back(project_raw(g, j, Projection::delta));
    near_g.push_back(project_raw(g, j, Projection::check));
  }
  using Term = std::pair<const SpectralField*, const SpectralField*>;
  std::vector<Term> fg_terms, gf_terms, r_terms;
  for (std::size_t i = 0; i < band_f.size(); ++i) {
    fg_terms.emplace_back(&low_f[i], &band_g[i]);
    gf_terms.emplace_back(&low_g[i], &band_f[i]);
    r_terms.emplace_back(&band_f[i], &near_g[i]);
  }
  return {dealiased_product_sum(fg_terms), dealiased_product_sum(gf_terms),
          dealiased_product_sum(r_terms)};
}

SpectralField commutator_with_product(const SpectralField& f, int j, const SpectralField& g,
                                      const SpectralField& fg, bool localized) {
  const SpectralField band_g = project_raw(g, j, Projection::delta);
  SpectralField out = dealiased_product(f, band_g) - project_raw(fg, j, Projection::delta);
  if (localized) out = project_raw(out, j, Projection::tilde);
  return out;
}

SpectralField commutator(const SpectralField& f, int j, const SpectralField& g, bool localized) {
  require_same_grid(f.grid(), g.grid(), "commutator");
  return commutator_with_product(f, j, g, dealiased_product(f, g), localized);
}

double square_function_norm(const SpectralField& v, double s, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("square_function_norm: p must be >= 1");
  const BandRange range = BandRange::for_grid(v.grid());
  const int m = fft::padded_size(v.grid().n());
  const std::size_t size = static_cast<std::size_t>(m) * m;
  RealBuffer acc(size, 0.0);
  for (int k = range.j_min; k <= range.j_max; ++k) {
    const SpectralField block = project_raw(v, k, Projection::delta) * std::pow(2.0, k * s);
    const RealBuffer samples = synthesize_on(block, m);
    for (std::size_t i = 0; i < size; ++i) acc[i] += samples[i] * samples[i];
  }
  for (double& x : acc) x = std::sqrt(x);
  if (std::isinf(p)) return kernels::omp::max_abs(acc);
  return std::pow(kernels::omp::sum_abs_pow(acc, p) / static_cast<double>(size), 1.0 / p);
}

SpectralField lp_reconstruct(const SpectralField& v) {
  const BandRange range = BandRange::for_grid(v.grid());
  SpectralField out(v.grid());
  for (int j = range.j_min; j <= range.j_max; ++j) out += project_raw(v, j, Projection::delta);
  return out;
}

}  // namespace sqg
