#include "sqg/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

namespace detail {

void* aligned_allocate(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

// Plans are created with FFTW_ESTIMATE: measured plans pick algorithms by
// timing, which would make results differ between runs in the last bits.
class PlanPair {
 public:
  explicit PlanPair(int m) : m_(m) {
    const std::size_t real_size = static_cast<std::size_t>(m) * m;
    const std::size_t half_size = static_cast<std::size_t>(m) * (m / 2 + 1);
    RealBuffer real(real_size);
    ComplexBuffer half(half_size);
    auto* creal = real.data();
    auto* chalf = reinterpret_cast<fftw_complex*>(half.data());
    forward_ = fftw_plan_dft_r2c_2d(m, m, creal, chalf, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_2d(m, m, chalf, creal, FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) {
      throw Error("FFTW plan creation failed for m = " + std::to_string(m));
    }
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  fftw_plan forward() const { return forward_; }
  fftw_plan inverse() const { return inverse_; }
  int m() const { return m_; }

  static std::mutex& planner_mutex() {
    static std::mutex mutex;
    return mutex;
  }

 private:
  int m_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

const PlanPair& plans_for(int m) {
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(PlanPair::planner_mutex());
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, std::make_unique<PlanPair>(m)).first;
  return *it->second;
}

// Per-thread scratch; plans are executed through the new-array interface.
ComplexBuffer& complex_scratch(std::size_t size) {
  thread_local ComplexBuffer buffer;
  if (buffer.size() < size) buffer.resize(size);
  return buffer;
}

RealBuffer& real_scratch(std::size_t size) {
  thread_local RealBuffer buffer;
  if (buffer.size() < size) buffer.resize(size);
  return buffer;
}

bool same_alignment(const void* p, const void* q) {
  return fftw_alignment_of(const_cast<double*>(static_cast<const double*>(p))) ==
         fftw_alignment_of(const_cast<double*>(static_cast<const double*>(q)));
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteError(std::string(what) + ": non-finite sample");
  }
}

void check_finite(std::span<const Complex> v, const char* what) {
  for (const Complex& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw NonFiniteError(std::string(what) + ": non-finite coefficient");
    }
  }
}

}  // namespace

namespace fft {

void r2c(int m, std::span<const double> in, std::span<Complex> out) {
  const auto& plans = plans_for(m);
  const std::size_t real_size = static_cast<std::size_t>(m) * m;
  const std::size_t half_size = static_cast<std::size_t>(m) * (m / 2 + 1);
  if (in.size() != real_size || out.size() != half_size) {
    throw InvalidArgument("r2c: buffer size mismatch for m = " + std::to_string(m));
  }
  // r2c preserves its input; only alignment needs care.
  const double* src = in.data();
  if (fftw_alignment_of(const_cast<double*>(src)) != 0) {
    RealBuffer& tmp = real_scratch(real_size);
    std::copy(in.begin(), in.end(), tmp.begin());
    src = tmp.data();
  }
  Complex* dst = out.data();
  ComplexBuffer* staged = nullptr;
  if (fftw_alignment_of(reinterpret_cast<double*>(dst)) != 0) {
    staged = &complex_scratch(half_size);
    dst = staged->data();
  }
  fftw_execute_dft_r2c(plans.forward(), const_cast<double*>(src),
                       reinterpret_cast<fftw_complex*>(dst));
  if (staged != nullptr) std::copy_n(staged->begin(), half_size, out.begin());
}

void c2r(int m, std::span<const Complex> in, std::span<double> out) {
  const auto& plans = plans_for(m);
  const std::size_t real_size = static_cast<std::size_t>(m) * m;
  const std::size_t half_size = static_cast<std::size_t>(m) * (m / 2 + 1);
  if (in.size() != half_size || out.size() != real_size) {
    throw InvalidArgument("c2r: buffer size mismatch for m = " + std::to_string(m));
  }
  // c2r destroys its input, so always stage a copy.
  ComplexBuffer& tmp = complex_scratch(half_size);
  std::copy(in.begin(), in.end(), tmp.begin());
  double* dst = out.data();
  RealBuffer* staged = nullptr;
  if (!same_alignment(dst, tmp.data())) {
    staged = &real_scratch(real_size);
    dst = staged->data();
  }
  fftw_execute_dft_c2r(plans.inverse(), reinterpret_cast<fftw_complex*>(tmp.data()), dst);
  if (staged != nullptr) std::copy_n(staged->begin(), real_size, out.begin());
}

void synthesize_padded(std::span<const Complex> coeffs, int n, int m, std::span<double> out) {
  if (m < n) throw InvalidArgument("synthesize_padded: target grid smaller than source");
  const int src_cols = n / 2 + 1;
  const int dst_cols = m / 2 + 1;
  ComplexBuffer padded(static_cast<std::size_t>(m) * dst_cols, Complex{});
  for (int r = 0; r < n; ++r) {
    if (r == n / 2) continue;
    const int k1 = r < n / 2 ? r : r - n;
    const int dr = k1 >= 0 ? k1 : k1 + m;
    const Complex* src = coeffs.data() + static_cast<std::size_t>(r) * src_cols;
    Complex* dst = padded.data() + static_cast<std::size_t>(dr) * dst_cols;
    std::copy_n(src, n / 2, dst);
  }
  c2r(m, padded, out);
}

void analyze_truncated(std::span<const double> samples, int m, int n, std::span<Complex> out) {
  if (m < n) throw InvalidArgument("analyze_truncated: source grid smaller than target");
  const int src_cols = m / 2 + 1;
  const int dst_cols = n / 2 + 1;
  ComplexBuffer full(static_cast<std::size_t>(m) * src_cols);
  r2c(m, samples, full);
  const double norm = 1.0 / (static_cast<double>(m) * m);
  std::fill(out.begin(), out.end(), Complex{});
  for (int r = 0; r < n; ++r) {
    if (r == n / 2) continue;
    const int k1 = r < n / 2 ? r : r - n;
    const int sr = k1 >= 0 ? k1 : k1 + m;
    const Complex* src = full.data() + static_cast<std::size_t>(sr) * src_cols;
    Complex* dst = out.data() + static_cast<std::size_t>(r) * dst_cols;
    for (int c = 0; c < n / 2; ++c) dst[c] = src[c] * norm;
  }
}

}  // namespace fft

SpectralField forward_transform(const PhysicalField& f) {
  check_finite(f.values(), "forward_transform");
  const TorusGrid& grid = f.grid();
  const int n = grid.n();
  ComplexBuffer coeffs(grid.spectral_size());
  fft::r2c(n, f.values(), coeffs);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  for (Complex& c : coeffs) c *= norm;
  return SpectralField(grid, std::move(coeffs));
}

double hermitian_defect(const SpectralField& F) {
  const TorusGrid& grid = F.grid();
  const int n = grid.n();
  double defect = 0.0;
  for (int col : {0, n / 2}) {
    for (int r = 0; r < n; ++r) {
      const int k1 = grid.freq_of_row(r);
      const int mirror = k1 == -n / 2 ? -n / 2 : -k1;
      const Complex a = F.at(r, col);
      const Complex b = F.at(grid.row_of_freq(mirror), col);
      defect = std::max(defect, std::abs(a - std::conj(b)));
    }
  }
  return defect;
}

PhysicalField inverse_transform(const SpectralField& F, double symmetry_tol) {
  check_finite(F.coeffs(), "inverse_transform");
  const double defect = hermitian_defect(F);
  const double scale = std::max(F.max_abs(), 1e-300);
  if (defect > symmetry_tol * scale) {
    throw SymmetryError("inverse_transform: Hermitian symmetry violated (defect " +
                        std::to_string(defect / scale) + " relative)");
  }
  const TorusGrid& grid = F.grid();
  RealBuffer values(grid.physical_size());
  fft::c2r(grid.n(), F.coeffs(), values);
  return PhysicalField(grid, std::move(values));
}

}  // namespace sqg
