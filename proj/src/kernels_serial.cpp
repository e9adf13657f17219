#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqg/kernels.hpp"

namespace sqg::kernels::serial {

void scale(std::span<Complex> c, std::span<const double> symbol) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol[i];
}

void scale_into(std::span<const Complex> in, std::span<const double> symbol,
                std::span<Complex> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * symbol[i];
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void riesz(const HalfLayout& layout, std::span<const double> inv_norm,
           std::span<const Complex> theta, std::span<Complex> u1, std::span<Complex> u2) {
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * layout.cols + c;
      const Complex i_theta = Complex(-theta[i].imag(), theta[i].real()) * inv_norm[i];
      u1[i] = -layout.k2[c] * i_theta;
      u2[i] = layout.k1[r] * i_theta;
    }
  }
}

void neg_divergence(const HalfLayout& layout, std::span<const Complex> flux1,
                    std::span<const Complex> flux2, std::span<Complex> out) {
  const double two_pi = 2.0 * std::numbers::pi;
  const int nyq_row = layout.rows / 2;
  const int nyq_col = layout.cols - 1;
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * layout.cols + c;
      if (r == nyq_row || c == nyq_col) {
        out[i] = Complex{};
        continue;
      }
      const Complex s = layout.k1[r] * flux1[i] + layout.k2[c] * flux2[i];
      // -2 pi i s
      out[i] = Complex(two_pi * s.imag(), -two_pi * s.real());
    }
  }
}

void etd_predict(const EtdWeights& w, std::span<const Complex> theta,
                 std::span<const Complex> nonlinear, std::span<Complex> out) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] = w.decay[i] * theta[i] + w.phi1[i] * nonlinear[i];
  }
}

void etd_correct(const EtdWeights& w, std::span<const Complex> predicted,
                 std::span<const Complex> nonlinear_predicted, std::span<const Complex> nonlinear,
                 std::span<Complex> out) {
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    out[i] = predicted[i] + w.phi2[i] * (nonlinear_predicted[i] - nonlinear[i]);
  }
}

double weighted_sum_sq(std::span<const Complex> c, std::span<const double> weight) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += weight[i] * std::norm(c[i]);
  return sum;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sum_abs_pow(std::span<const double> v, double p) {
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : v) sum += x * x;
  } else if (p == 1.0) {
    for (double x : v) sum += std::abs(x);
  } else {
    for (double x : v) sum += std::pow(std::abs(x), p);
  }
  return sum;
}

}  // namespace sqg::kernels::serial
