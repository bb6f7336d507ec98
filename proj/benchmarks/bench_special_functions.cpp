#include <benchmark/benchmark.h>

#include "hetnet/special_functions.hpp"

namespace {

void BM_Hyp2f1Series(benchmark::State& state) {
    const double z = -state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(hetnet::hyp2f1_interference(3.8, z));
}
BENCHMARK(BM_Hyp2f1Series)->Arg(0)->Arg(1)->Arg(10)->Arg(1000);

void BM_Hyp2f1Integral(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hetnet::hyp2f1_interference_integral(3.8, -5.0));
}
BENCHMARK(BM_Hyp2f1Integral);

void BM_Gamma(benchmark::State& state) {
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::gamma_fn(x));
        x = x < 5.0 ? x + 0.1 : 0.5;
    }
}
BENCHMARK(BM_Gamma);

}  // namespace
