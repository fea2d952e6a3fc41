// Serial reference kernels vs the im2col/GEMM + OpenMP kernels.
// Usage: duvio_bench [--benchmark_filter=...]; set OMP_NUM_THREADS to vary threads.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "duvio/kernels/conv.hpp"
#include "duvio/kernels/gemm.hpp"
#include "duvio/kernels/reference.hpp"

using namespace duvio::kernels;

namespace {

std::vector<double> randn(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Visual encoder first layer on a 4-pair batch at 128x64; generator-like 3x3.
Conv2dGeometry geometry(int which) {
  if (which == 0) return {4, 2, 64, 128, 16, 7, 7, 2, 2, 3, 3, 1};
  return {4, 16, 32, 64, 16, 3, 3, 1, 1, 1, 1, 1};
}

template <bool Optimized>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = randn(n * n), b = randn(n * n);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    if constexpr (Optimized) gemm(false, true, n, n, n, 1.0, a, b, 0.0, c);
    else reference::gemm(false, true, n, n, n, 1.0, a, b, 0.0, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(2.0 * n * n * n, benchmark::Counter::kIsIterationInvariantRate,
                                                 benchmark::Counter::kIs1000);
}

template <bool Optimized>
void BM_ConvForward(benchmark::State& state) {
  const Conv2dGeometry g = geometry(static_cast<int>(state.range(0)));
  const auto x = randn(g.in_size()), w = randn(g.weight_size()), b = randn(g.out_channels);
  std::vector<double> y(g.out_size());
  for (auto _ : state) {
    if constexpr (Optimized) conv2d_forward(g, x, w, b, y);
    else reference::conv2d_forward(g, x, w, b, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Optimized>
void BM_ConvBackward(benchmark::State& state) {
  const Conv2dGeometry g = geometry(static_cast<int>(state.range(0)));
  const auto x = randn(g.in_size()), w = randn(g.weight_size()), gy = randn(g.out_size());
  std::vector<double> gx(g.in_size()), gw(g.weight_size()), gb(g.out_channels);
  for (auto _ : state) {
    if constexpr (Optimized) {
      conv2d_backward_input(g, gy, w, gx);
      conv2d_backward_weight(g, x, gy, gw, gb);
    } else {
      reference::conv2d_backward_input(g, gy, w, gx);
      reference::conv2d_backward_weight(g, x, gy, gw, gb);
    }
    benchmark::DoNotOptimize(gx.data());
    benchmark::DoNotOptimize(gw.data());
  }
}

}  // namespace

BENCHMARK(BM_Gemm<false>)->Name("gemm/reference")->Arg(64)->Arg(256);
BENCHMARK(BM_Gemm<true>)->Name("gemm/optimized")->Arg(64)->Arg(256);
BENCHMARK(BM_ConvForward<false>)->Name("conv_forward/reference")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvForward<true>)->Name("conv_forward/optimized")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<false>)->Name("conv_backward/reference")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<true>)->Name("conv_backward/optimized")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
