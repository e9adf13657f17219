#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace sqg {

/// Uniform n x n collocation grid on the unit torus [0,1)^2.
///
/// Physical samples are stored row-major with the first index along x1.
/// Spectral data uses the real-to-complex half layout: n rows (frequency
/// j1) by n/2+1 columns (frequency j2 >= 0). Row r carries j1 = r for
/// r < n/2 and r - n otherwise, so the resolvable lattice is [-n/2, n/2)^2.
class TorusGrid {
 public:
  static constexpr int kMinModes = 8;

  explicit TorusGrid(int n);

  int n() const { return n_; }
  int half_cols() const { return n_ / 2 + 1; }
  std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * half_cols(); }
  double spacing() const { return 1.0 / n_; }

  int freq_of_row(int row) const { return row < n_ / 2 ? row : row - n_; }
  int freq_of_col(int col) const { return col == n_ / 2 ? -n_ / 2 : col; }
  int row_of_freq(int k1) const { return k1 >= 0 ? k1 : k1 + n_; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * half_cols() + col;
  }
  bool is_nyquist(int row, int col) const { return row == n_ / 2 || col == n_ / 2; }
  /// Largest |j_i| kept by the 2/3 truncation rule.
  int dealias_cutoff() const { return n_ / 3; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) { return a.n_ == b.n_; }

 private:
  int n_;
};

/// Immutable per-grid lookup tables shared by every operator on that grid.
struct SpectralTables {
  explicit SpectralTables(const TorusGrid& grid);

  TorusGrid grid;
  std::vector<double> k1;            ///< j1 per row
  std::vector<double> k2;            ///< j2 per column (Nyquist column negative)
  std::vector<double> lattice_norm;  ///< |j|, half layout
  std::vector<double> wavevector;    ///< 2 pi |j|, half layout
  std::vector<double> multiplicity;  ///< 1 on self-conjugate columns, 2 elsewhere
  std::vector<unsigned char> nyquist;
  std::vector<unsigned char> retained;  ///< 2/3-rule band, Nyquist excluded

  /// Tables are built once per n and shared; safe to call concurrently.
  static std::shared_ptr<const SpectralTables> get(int n);
};

}  // namespace sqg
