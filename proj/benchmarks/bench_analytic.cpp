#include <benchmark/benchmark.h>

#include "hetnet/analytic.hpp"
#include "hetnet/config_io.hpp"

namespace {

namespace an = hetnet::analytic;

const hetnet::NetworkConfig& pico() {
    static const hetnet::NetworkConfig c = hetnet::builtin_scenario("table2_pico");
    return c;
}

void BM_AssocCudaMean(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(an::assoc_prob_cuda_mean(pico(), 0));
}
BENCHMARK(BM_AssocCudaMean);

void BM_AssocCudaFading(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(an::assoc_prob_cuda_fading(pico(), 0));
}
BENCHMARK(BM_AssocCudaFading);

void BM_LaplaceInterference(benchmark::State& state) {
    const auto assoc = an::assoc_probs(pico(), hetnet::AccessMode::Duda);
    for (auto _ : state)
        benchmark::DoNotOptimize(an::laplace_interference(
            {pico(), 0, 1.5, 2000.0}, hetnet::AccessMode::Duda, assoc));
}
BENCHMARK(BM_LaplaceInterference);

void BM_MeanRate(benchmark::State& state) {
    const auto assoc = an::assoc_probs(pico(), hetnet::AccessMode::Duda);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            an::mean_rate(pico(), 0, hetnet::AccessMode::Duda, assoc));
}
BENCHMARK(BM_MeanRate)->Unit(benchmark::kMillisecond);

void BM_MeanUePower(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            an::mean_ue_power(pico(), 0, hetnet::AccessMode::Duda));
}
BENCHMARK(BM_MeanUePower);

}  // namespace
