#include "sqg/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

PhysicalField::PhysicalField(TorusGrid grid) : grid_(grid), values_(grid.physical_size(), 0.0) {}

PhysicalField::PhysicalField(TorusGrid grid, RealBuffer values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.physical_size()) {
    throw InvalidArgument("physical field has " + std::to_string(values_.size()) +
                          " samples, grid expects " + std::to_string(grid_.physical_size()));
  }
}

PhysicalField PhysicalField::from_function(TorusGrid grid,
                                           const std::function<double(double, double)>& f) {
  PhysicalField out(grid);
  const int n = grid.n();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out.values_[static_cast<std::size_t>(a) * n + b] =
          f(static_cast<double>(a) / n, static_cast<double>(b) / n);
    }
  }
  return out;
}

SpectralField::SpectralField(TorusGrid grid)
    : grid_(grid), coeffs_(grid.spectral_size(), Complex{}) {}

SpectralField::SpectralField(TorusGrid grid, ComplexBuffer coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw InvalidArgument("spectral field has " + std::to_string(coeffs_.size()) +
                          " coefficients, grid expects " + std::to_string(grid_.spectral_size()));
  }
}

Complex SpectralField::mode(int k1, int k2) const {
  const int half = grid_.n() / 2;
  if (k1 < -half || k1 >= half || k2 < -half || k2 >= half) {
    throw InvalidArgument("mode (" + std::to_string(k1) + ", " + std::to_string(k2) +
                          ") outside the resolvable lattice");
  }
  if (k2 == -half) return at(grid_.row_of_freq(k1), half);
  if (k2 >= 0) return at(grid_.row_of_freq(k1), k2);
  // Mirror of k1 = -n/2 is itself modulo n.
  const int mirror = k1 == -half ? -half : -k1;
  return std::conj(at(grid_.row_of_freq(mirror), -k2));
}

void SpectralField::set_mode(int k1, int k2, Complex value) {
  const int half = grid_.n() / 2;
  if (k1 < -half || k1 >= half || k2 < -half || k2 >= half) {
    throw InvalidArgument("mode (" + std::to_string(k1) + ", " + std::to_string(k2) +
                          ") outside the resolvable lattice");
  }
  if (k2 < 0 && k2 != -half) {
    k1 = k1 == -half ? -half : -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  const int col = k2 == -half ? half : k2;
  const std::size_t idx = grid_.index(grid_.row_of_freq(k1), col);
  if (col != 0 && col != half) {
    coeffs_[idx] = value;
    return;
  }
  // Self-conjugate column: the partner lives in the same column.
  const int mirror = k1 == -half ? -half : -k1;
  if (mirror == k1) {
    coeffs_[idx] = Complex(value.real(), 0.0);
  } else {
    coeffs_[idx] = value;
    coeffs_[grid_.index(grid_.row_of_freq(mirror), col)] = std::conj(value);
  }
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (Complex& c : coeffs_) c *= scale;
  return *this;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) {
    throw InvalidArgument(std::string(what) + ": grid mismatch (n = " + std::to_string(a.n()) +
                          " vs " + std::to_string(b.n()) + ")");
  }
}

}  // namespace sqg
