// Serial and OpenMP kernels side by side, plus one transform and one solver step.
//   ./sqg_bench --benchmark_filter=etd
// SQG_THREADS caps the OpenMP team.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "sqg/estimates.hpp"
#include "sqg/fft.hpp"
#include "sqg/grid.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"

namespace {

namespace k = sqg::kernels;

struct Buffers {
  explicit Buffers(int n) {
    const sqg::TorusGrid grid(n);
    const std::size_t spec = grid.spectral_size();
    const std::size_t phys = 4 * grid.physical_size();
    std::mt19937_64 rng(n);
    std::normal_distribution<double> normal;
    for (auto* v : {&c, &c2, &c3, &out}) {
      v->resize(spec);
      for (auto& z : *v) z = {normal(rng), normal(rng)};
    }
    sym.resize(spec);
    for (auto& x : sym) x = std::abs(normal(rng));
    for (auto* v : {&a, &b, &prod}) {
      v->resize(phys);
      for (auto& x : *v) x = normal(rng);
    }
  }
  std::vector<k::Complex> c, c2, c3, out;
  std::vector<double> sym, a, b, prod;
};

struct Serial {
  static void scale_into(Buffers& m) { k::serial::scale_into(m.c, m.sym, m.out); }
  static void product(Buffers& m) { k::serial::product(m.a, m.b, m.prod); }
  static void etd(Buffers& m) {
    const k::EtdWeights w{m.sym, m.sym, m.sym};
    k::serial::etd_predict(w, m.c, m.c2, m.out);
    k::serial::etd_correct(w, m.out, m.c3, m.c2, m.out);
  }
  static double weighted_sum_sq(Buffers& m) { return k::serial::weighted_sum_sq(m.c, m.sym); }
  static double max_abs(Buffers& m) { return k::serial::max_abs(m.a); }
};

struct Omp {
  static void scale_into(Buffers& m) { k::omp::scale_into(m.c, m.sym, m.out); }
  static void product(Buffers& m) { k::omp::product(m.a, m.b, m.prod); }
  static void etd(Buffers& m) {
    const k::EtdWeights w{m.sym, m.sym, m.sym};
    k::omp::etd_predict(w, m.c, m.c2, m.out);
    k::omp::etd_correct(w, m.out, m.c3, m.c2, m.out);
  }
  static double weighted_sum_sq(Buffers& m) { return k::omp::weighted_sum_sq(m.c, m.sym); }
  static double max_abs(Buffers& m) { return k::omp::max_abs(m.a); }
};

template <class K>
void BM_scale_into(benchmark::State& state) {
  Buffers m(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    K::scale_into(m);
    benchmark::DoNotOptimize(m.out.data());
  }
}

template <class K>
void BM_product(benchmark::State& state) {
  Buffers m(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    K::product(m);
    benchmark::DoNotOptimize(m.prod.data());
  }
}

template <class K>
void BM_etd(benchmark::State& state) {
  Buffers m(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    K::etd(m);
    benchmark::DoNotOptimize(m.out.data());
  }
}

template <class K>
void BM_weighted_sum_sq(benchmark::State& state) {
  Buffers m(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(K::weighted_sum_sq(m));
}

template <class K>
void BM_max_abs(benchmark::State& state) {
  Buffers m(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(K::max_abs(m));
}

void BM_forward_transform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sqg::PhysicalField f = sqg::inverse_transform(sqg::gen_rough_data(1, 1.05, n, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::forward_transform(f));
}

void BM_etd2_step(benchmark::State& state) {
  sqg::SolverConfig config;
  config.n = static_cast<int>(state.range(0));
  config.gamma = 1.0;
  config.dt = 1e-4;
  sqg::Stepper stepper(config);
  sqg::SimulationState s{0.0, sqg::gen_rough_data(1, 1.05, config.n, 1.0), 0};
  for (auto _ : state) stepper.advance(s, config.dt);
  state.counters["t"] = s.t;
}

#define SQG_PAIR(name)                                                                 \
  BENCHMARK_TEMPLATE(name, Serial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond); \
  BENCHMARK_TEMPLATE(name, Omp)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond)

SQG_PAIR(BM_scale_into);
SQG_PAIR(BM_product);
SQG_PAIR(BM_etd);
SQG_PAIR(BM_weighted_sum_sq);
SQG_PAIR(BM_max_abs);
BENCHMARK(BM_forward_transform)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_etd2_step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  k::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 2;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
