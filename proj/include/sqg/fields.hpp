#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <new>
#include <span>
#include <vector>

#include "sqg/grid.hpp"

namespace sqg {

using Complex = std::complex<double>;

namespace detail {
void* aligned_allocate(std::size_t bytes);
void aligned_free(void* p) noexcept;
}  // namespace detail

/// Allocator returning SIMD-aligned storage suitable for the FFT backend.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t count) {
    return static_cast<T*>(detail::aligned_allocate(count * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::aligned_free(p); }
  template <class U>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<U>&) {
    return true;
  }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Real samples at the n x n collocation points x = (a/n, b/n).
class PhysicalField {
 public:
  explicit PhysicalField(TorusGrid grid);
  PhysicalField(TorusGrid grid, RealBuffer values);

  /// Samples f(x1, x2) at every collocation point.
  static PhysicalField from_function(TorusGrid grid,
                                     const std::function<double(double, double)>& f);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double at(int a, int b) const { return values_[static_cast<std::size_t>(a) * grid_.n() + b]; }

 private:
  TorusGrid grid_;
  RealBuffer values_;
};

/// Fourier coefficients of a real field, theta(x) = sum_j c(j) exp(2 pi i j.x),
/// stored in the half layout described on TorusGrid.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, ComplexBuffer coeffs);

  const TorusGrid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex at(int row, int col) const { return coeffs_[grid_.index(row, col)]; }

  /// Coefficient of lattice mode (k1, k2) with k in [-n/2, n/2)^2.
  Complex mode(int k1, int k2) const;
  /// Assigns mode (k1, k2) and its conjugate partner so the field stays real.
  void set_mode(int k1, int k2, Complex value);

  Complex mean() const { return coeffs_[0]; }
  double max_abs() const;
  bool is_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  TorusGrid grid_;
  ComplexBuffer coeffs_;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

}  // namespace sqg
