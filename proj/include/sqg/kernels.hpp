#pragma once

// Data-parallel inner loops of the solver and the norm evaluations.
//
// Every kernel exists twice with identical signatures: `serial` is the plain
// reference loop kept for testing, `omp` is the OpenMP version the library
// calls. Reductions in `omp` sum fixed-size blocks and combine the partials in
// block order, so results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace sqg::kernels {

using Complex = std::complex<double>;

/// Row/column frequency tables for kernels that act on the half layout.
struct HalfLayout {
  int rows;
  int cols;
  std::span<const double> k1;  ///< size rows
  std::span<const double> k2;  ///< size cols
};

/// ETD2 per-mode weights for one step size.
struct EtdWeights {
  std::span<const double> decay;  ///< exp(z)
  std::span<const double> phi1;   ///< dt * (exp(z) - 1) / z
  std::span<const double> phi2;   ///< dt * (exp(z) - 1 - z) / z^2
};

#define SQG_KERNEL_DECLS                                                                       \
  void scale(std::span<Complex> c, std::span<const double> symbol);                            \
  void scale_into(std::span<const Complex> in, std::span<const double> symbol,                 \
                  std::span<Complex> out);                                                     \
  void product(std::span<const double> a, std::span<const double> b, std::span<double> out);   \
  void riesz(const HalfLayout& layout, std::span<const double> inv_norm,                       \
             std::span<const Complex> theta, std::span<Complex> u1, std::span<Complex> u2);    \
  void neg_divergence(const HalfLayout& layout, std::span<const Complex> flux1,                \
                      std::span<const Complex> flux2, std::span<Complex> out);                 \
  void etd_predict(const EtdWeights& w, std::span<const Complex> theta,                        \
                   std::span<const Complex> nonlinear, std::span<Complex> out);                \
  void etd_correct(const EtdWeights& w, std::span<const Complex> predicted,                    \
                   std::span<const Complex> nonlinear_predicted,                               \
                   std::span<const Complex> nonlinear, std::span<Complex> out);                \
  double weighted_sum_sq(std::span<const Complex> c, std::span<const double> weight);          \
  double max_abs(std::span<const double> v);                                                   \
  double sum_abs_pow(std::span<const double> v, double p);

namespace serial {
SQG_KERNEL_DECLS
}  // namespace serial

namespace omp {
SQG_KERNEL_DECLS
}  // namespace omp

#undef SQG_KERNEL_DECLS

/// Applies the SQG_THREADS cap, if set, to the OpenMP runtime.
void configure_threads_from_env();
int max_threads();

}  // namespace sqg::kernels
