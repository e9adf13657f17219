#include "sqg/random_fields.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace sqg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t zigzag(int v) {
  return v >= 0 ? static_cast<std::uint64_t>(v) << 1
                : (static_cast<std::uint64_t>(-static_cast<long long>(v)) << 1) - 1;
}

// Visits one representative per conjugate pair of non-Nyquist, nonzero modes
// and writes the conjugate partner when it shares the stored column.
void fill_hermitian(SpectralField& F, const std::function<Complex(int, int)>& draw) {
  const TorusGrid& grid = F.grid();
  const int n = grid.n();
  auto coeffs = F.coeffs();
  for (int r = 0; r < n; ++r) {
    if (r == n / 2) continue;
    const int k1 = grid.freq_of_row(r);
    for (int c = 0; c < n / 2; ++c) {
      if (c == 0 && k1 <= 0) continue;
      const Complex value = draw(k1, c);
      coeffs[grid.index(r, c)] = value;
      if (c == 0) coeffs[grid.index(grid.row_of_freq(-k1), 0)] = std::conj(value);
    }
  }
}

}  // namespace

double mode_uniform(std::uint64_t seed, int k1, int k2, int stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ zigzag(k1));
  h = splitmix64(h ^ (zigzag(k2) << 1));
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SpectralField random_field(const TorusGrid& grid, std::uint64_t seed, double alpha,
                           double max_lattice_norm) {
  SpectralField F(grid);
  fill_hermitian(F, [&](int k1, int k2) {
    const double norm = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
    if (norm > max_lattice_norm) return Complex{};
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - mode_uniform(seed, k1, k2, 0);
    const double u2 = mode_uniform(seed, k1, k2, 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    const double envelope = std::pow(norm, -alpha);
    return std::polar(radius * envelope / std::numbers::sqrt2, angle);
  });
  return F;
}

SpectralField rough_field(const TorusGrid& grid, std::uint64_t seed, double sigma,
                          double amplitude) {
  SpectralField F(grid);
  if (amplitude == 0.0) return F;
  fill_hermitian(F, [&](int k1, int k2) {
    const double norm = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
    const double magnitude = amplitude * std::pow(1.0 + norm, -(1.0 + sigma));
    return std::polar(magnitude, 2.0 * std::numbers::pi * mode_uniform(seed, k1, k2, 2));
  });
  return F;
}

}  // namespace sqg
