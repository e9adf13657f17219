#include "sqg/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

TorusGrid::TorusGrid(int n) : n_(n) {
  if (n < kMinModes || n % 2 != 0) {
    throw InvalidArgument("grid size n must be an even integer >= 8, got " + std::to_string(n));
  }
}

SpectralTables::SpectralTables(const TorusGrid& g) : grid(g) {
  const int n = g.n();
  const int cols = g.half_cols();
  const int cutoff = g.dealias_cutoff();
  k1.resize(n);
  k2.resize(cols);
  for (int r = 0; r < n; ++r) k1[r] = g.freq_of_row(r);
  for (int c = 0; c < cols; ++c) k2[c] = g.freq_of_col(c);

  const std::size_t size = g.spectral_size();
  lattice_norm.resize(size);
  wavevector.resize(size);
  multiplicity.resize(size);
  nyquist.resize(size);
  retained.resize(size);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = g.index(r, c);
      const double norm = std::hypot(k1[r], k2[c]);
      lattice_norm[i] = norm;
      wavevector[i] = 2.0 * std::numbers::pi * norm;
      multiplicity[i] = (c == 0 || c == n / 2) ? 1.0 : 2.0;
      nyquist[i] = g.is_nyquist(r, c) ? 1 : 0;
      retained[i] = (!nyquist[i] && std::abs(k1[r]) <= cutoff && std::abs(k2[c]) <= cutoff) ? 1 : 0;
    }
  }
}

std::shared_ptr<const SpectralTables> SpectralTables::get(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SpectralTables>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto tables = std::make_shared<const SpectralTables>(TorusGrid(n));
  cache.emplace(n, tables);
  return tables;
}

}  // namespace sqg
