// Compares the OpenMP kernels against the single-threaded reference
// implementations on the hot paths: variation accumulation, Gauss TV,
// L^p norms and fine-grid box averaging.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tvq1/field.hpp"
#include "tvq1/grid.hpp"
#include "tvq1/interpolate.hpp"
#include "tvq1/serial_ref.hpp"
#include "tvq1/variation.hpp"

namespace {

tvq1::GridFunction random_grid(int n, std::uint64_t seed) {
  const tvq1::DomainSpec d = tvq1::DomainSpec::torus(n, n);
  std::vector<double> v(d.node_count());
  std::uint64_t state = seed;
  for (double& x : v) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }
  return {d, std::move(v)};
}

void BM_directional_variation_omp(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::directional_variation(u, 1));
}

void BM_directional_variation_serial(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::serial::directional_variation(u, 1));
}

void BM_tv_iso_omp(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::tv_iso(u, 4));
}

void BM_tv_iso_serial(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::serial::tv_iso(u, 4));
}

void BM_lp_norm_omp(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::lp_norm(u, 1.0));
}

void BM_lp_norm_serial(benchmark::State& state) {
  const auto u = random_grid(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::serial::lp_norm(u, 1.0));
}

void BM_box_average_omp(benchmark::State& state) {
  const int coarse_n = static_cast<int>(state.range(0));
  const auto fine = random_grid(8 * coarse_n, 4);
  const auto w = tvq1::InputField::fine_grid(fine);
  const auto d = tvq1::DomainSpec::torus(coarse_n, coarse_n);
  for (auto _ : state) benchmark::DoNotOptimize(tvq1::box_average_interpolant(w, d));
}

void BM_box_average_serial(benchmark::State& state) {
  const int coarse_n = static_cast<int>(state.range(0));
  const auto fine = random_grid(8 * coarse_n, 4);
  const auto d = tvq1::DomainSpec::torus(coarse_n, coarse_n);
  for (auto _ : state)
    benchmark::DoNotOptimize(tvq1::serial::box_average_interpolant(fine, d));
}

BENCHMARK(BM_directional_variation_omp)->Arg(256)->Arg(1024);
BENCHMARK(BM_directional_variation_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_tv_iso_omp)->Arg(256)->Arg(1024);
BENCHMARK(BM_tv_iso_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_lp_norm_omp)->Arg(256)->Arg(1024);
BENCHMARK(BM_lp_norm_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_box_average_omp)->Arg(32)->Arg(64);
BENCHMARK(BM_box_average_serial)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
