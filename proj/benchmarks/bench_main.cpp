#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "eikamp/bessel_products.hpp"
#include "eikamp/eikonal.hpp"
#include "eikamp/oracle.hpp"
#include "eikamp/special_functions.hpp"

using namespace eikamp;

namespace {

eikonal::BornModel gaussian(double chi0) {
  return eikonal::BornModel::gaussian(4.0 * std::numbers::pi * chi0, 1.0);
}

void BM_BesselJ0(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) + 0.37;
  for (auto _ : state) benchmark::DoNotOptimize(special::bessel_j0(x));
}
BENCHMARK(BM_BesselJ0)->Arg(1)->Arg(20)->Arg(1000);

void BM_EllipticK(benchmark::State& state) {
  const special::EllipticModulus k(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(special::elliptic_k(k));
}
BENCHMARK(BM_EllipticK);

void BM_F4(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(besselprod::f4_eval({2.0, 3.0, 4.0, 6.0}));
}
BENCHMARK(BM_F4);

void BM_F5(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(besselprod::f5_eval({1.0, 1.2, 1.5, 0.8, 1.1}, 1e-8).value);
  }
}
BENCHMARK(BM_F5)->Unit(benchmark::kMillisecond);

void BM_A2Term(benchmark::State& state) {
  const auto m = gaussian(0.3);
  const eikonal::Kinematics k(1.0, -1.0);
  const quad::QuadratureConfig cfg{1e-6, 1e-12, 4000, 1e-16};
  for (auto _ : state) benchmark::DoNotOptimize(eikonal::a2_term(m, k, cfg).value);
}
BENCHMARK(BM_A2Term)->Unit(benchmark::kMillisecond);

void BM_A3Term(benchmark::State& state) {
  const auto m = gaussian(0.3);
  const eikonal::Kinematics k(1.0, -1.0);
  const quad::QuadratureConfig cfg{1e-6, 1e-12, 4000, 1e-16};
  for (auto _ : state) benchmark::DoNotOptimize(eikonal::a3_term(m, k, cfg).value);
}
BENCHMARK(BM_A3Term)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_DirectOracle(benchmark::State& state) {
  const auto m = gaussian(0.3);
  const eikonal::Kinematics k(1.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::direct_eikonal_amplitude(m, k).value);
  }
}
BENCHMARK(BM_DirectOracle)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DampedReference(benchmark::State& state) {
  const std::vector<double> p{2.0, 3.0, 4.0, 6.0};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::reference_besselproduct(p).value);
}
BENCHMARK(BM_DampedReference)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
