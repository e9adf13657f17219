#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "sqg/kernels.hpp"

namespace sqg::kernels {

namespace {

// Fixed block length for reductions; independent of the thread count.
constexpr std::size_t kBlock = 4096;

std::size_t block_count(std::size_t size) { return (size + kBlock - 1) / kBlock; }

template <class Partial>
double blocked_reduce(std::size_t size, Partial partial, bool take_max) {
  const std::size_t blocks = block_count(size);
  std::vector<double> partials(blocks, 0.0);
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(size, lo + kBlock);
    partials[b] = partial(lo, hi);
  }
  double acc = 0.0;
  for (double p : partials) acc = take_max ? std::max(acc, p) : acc + p;
  return acc;
}

}  // namespace

namespace omp {

void scale(std::span<Complex> c, std::span<const double> symbol) {
  const auto n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) c[i] *= symbol[i];
}

void scale_into(std::span<const Complex> in, std::span<const double> symbol,
                std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = in[i] * symbol[i];
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void riesz(const HalfLayout& layout, std::span<const double> inv_norm,
           std::span<const Complex> theta, std::span<Complex> u1, std::span<Complex> u2) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < layout.rows; ++r) {
    const double k1 = layout.k1[r];
    for (int c = 0; c < layout.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * layout.cols + c;
      const Complex i_theta = Complex(-theta[i].imag(), theta[i].real()) * inv_norm[i];
      u1[i] = -layout.k2[c] * i_theta;
      u2[i] = k1 * i_theta;
    }
  }
}

void neg_divergence(const HalfLayout& layout, std::span<const Complex> flux1,
                    std::span<const Complex> flux2, std::span<Complex> out) {
  const double two_pi = 2.0 * std::numbers::pi;
  const int nyq_row = layout.rows / 2;
  const int nyq_col = layout.cols - 1;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < layout.rows; ++r) {
    const double k1 = layout.k1[r];
    for (int c = 0; c < layout.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * layout.cols + c;
      if (r == nyq_row || c == nyq_col) {
        out[i] = Complex{};
        continue;
      }
      const Complex s = k1 * flux1[i] + layout.k2[c] * flux2[i];
      out[i] = Complex(two_pi * s.imag(), -two_pi * s.real());
    }
  }
}

void etd_predict(const EtdWeights& w, std::span<const Complex> theta,
                 std::span<const Complex> nonlinear, std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(theta.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = w.decay[i] * theta[i] + w.phi1[i] * nonlinear[i];
  }
}

void etd_correct(const EtdWeights& w, std::span<const Complex> predicted,
                 std::span<const Complex> nonlinear_predicted, std::span<const Complex> nonlinear,
                 std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(predicted.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = predicted[i] + w.phi2[i] * (nonlinear_predicted[i] - nonlinear[i]);
  }
}

double weighted_sum_sq(std::span<const Complex> c, std::span<const double> weight) {
  return blocked_reduce(
      c.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += weight[i] * std::norm(c[i]);
        return s;
      },
      false);
}

double max_abs(std::span<const double> v) {
  return blocked_reduce(
      v.size(),
      [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
        return m;
      },
      true);
}

double sum_abs_pow(std::span<const double> v, double p) {
  return blocked_reduce(
      v.size(),
      [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        if (p == 2.0) {
          for (std::size_t i = lo; i < hi; ++i) s += v[i] * v[i];
        } else if (p == 1.0) {
          for (std::size_t i = lo; i < hi; ++i) s += std::abs(v[i]);
        } else {
          for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::abs(v[i]), p);
        }
        return s;
      },
      false);
}

}  // namespace omp

void configure_threads_from_env() {
  const char* env = std::getenv("SQG_THREADS");
  if (env == nullptr || *env == '\0') return;
  try {
    const int threads = std::stoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  } catch (const std::exception&) {
    // Unparseable values leave the runtime default in place.
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace sqg::kernels
