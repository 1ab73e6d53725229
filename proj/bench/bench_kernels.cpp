// Serial reference kernels against their OpenMP counterparts. Run with
// OMP_NUM_THREADS set to compare scaling; results are identical by construction.

#include <benchmark/benchmark.h>

#include "gmce/kernels.hpp"
#include "gmce/model.hpp"
#include "gmce/quadrature.hpp"
#include "gmce/reference.hpp"
#include "gmce/simulate.hpp"

namespace {

const gmce::ModelParams kParams{};

gmce::Matrix noise(std::size_t n) { return gmce::white_noise_grid(n, n, 1.0, 7); }

void BM_filter_openmp(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto c1 = gmce::gegenbauer_coeffs(40, kParams.d1, kParams.u1);
  const auto c2 = gmce::gegenbauer_coeffs(40, kParams.d2, kParams.u2);
  const auto in = noise(T + 41);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::kernels::separable_filter(in, c1, c2));
}

void BM_filter_serial_direct(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto c1 = gmce::gegenbauer_coeffs(40, kParams.d1, kParams.u1);
  const auto c2 = gmce::gegenbauer_coeffs(40, kParams.d2, kParams.u2);
  const auto in = noise(T + 41);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::reference::direct_ma_sum(in, c1, c2));
}

void BM_integrate_openmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = gmce::midpoint_grid(n, kParams);
  const gmce::Matrix v(n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::kernels::tensor_integrate(q, v));
}

void BM_integrate_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = gmce::midpoint_grid(n, kParams);
  const gmce::Matrix v(n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::reference::tensor_integrate(q, v));
}

void BM_dft_fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = noise(51);
  const double h = 3.141592653589793 / static_cast<double>(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(gmce::kernels::uniform_dft2(data, 0, 0, -3.141592653589793 + h, -3.141592653589793 + h, n, n));
}

void BM_dft_separable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = noise(51);
  const auto q = gmce::midpoint_grid(n, kParams);
  for (auto _ : state)
    benchmark::DoNotOptimize(gmce::kernels::separable_dft2(data, 0, 0, q.axis1().nodes, q.axis2().nodes));
}

void BM_dft_serial_direct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = noise(21);
  const auto q = gmce::midpoint_grid(n, kParams);
  for (auto _ : state)
    benchmark::DoNotOptimize(gmce::reference::direct_dft2(data, 0, 0, q.axis1().nodes, q.axis2().nodes));
}

void BM_lags_openmp(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto y = noise(T + 1);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::kernels::lag_products(y, T));
}

void BM_lags_serial(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto y = noise(T + 1);
  for (auto _ : state) benchmark::DoNotOptimize(gmce::reference::lag_products(y, T));
}

}  // namespace

BENCHMARK(BM_filter_openmp)->Arg(50)->Arg(200);
BENCHMARK(BM_filter_serial_direct)->Arg(50)->Arg(200);
BENCHMARK(BM_integrate_openmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_integrate_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_dft_fft)->Arg(64)->Arg(256);
BENCHMARK(BM_dft_separable)->Arg(64)->Arg(256);
BENCHMARK(BM_dft_serial_direct)->Arg(64);
BENCHMARK(BM_lags_openmp)->Arg(20)->Arg(50);
BENCHMARK(BM_lags_serial)->Arg(20)->Arg(50);

BENCHMARK_MAIN();
