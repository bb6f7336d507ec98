#include <benchmark/benchmark.h>

#include "hetnet/analytic.hpp"
#include "hetnet/config_io.hpp"
#include "hetnet/mc.hpp"
#include "hetnet/rng.hpp"

namespace {

namespace an = hetnet::analytic;
namespace mc = hetnet::mc;

const hetnet::NetworkConfig& pico() {
    static const hetnet::NetworkConfig c = hetnet::builtin_scenario("table2_pico");
    return c;
}

void BM_SamplePpp(benchmark::State& state) {
    auto rng = hetnet::drop_stream(1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::sample_ppp(0.05, 100.0, rng));
}
BENCHMARK(BM_SamplePpp)->Unit(benchmark::kMicrosecond);

void BM_InterferenceDrop(benchmark::State& state) {
    const auto assoc = an::assoc_probs(pico(), hetnet::AccessMode::Duda);
    auto rng = hetnet::drop_stream(1, 0);
    std::uint64_t d = 0;
    for (auto _ : state) {
        rng = hetnet::drop_stream(1, d++);
        benchmark::DoNotOptimize(mc::sample_interference(
            pico(), hetnet::AccessMode::Duda, assoc, 1.0, {}, rng));
    }
}
BENCHMARK(BM_InterferenceDrop)->Unit(benchmark::kMicrosecond);

void BM_AssociationDrop(benchmark::State& state) {
    std::uint64_t d = 0;
    std::vector<std::vector<mc::Point>> bs(2);
    for (auto _ : state) {
        auto rng = hetnet::drop_stream(2, d++);
        for (std::size_t j = 0; j < 2; ++j)
            bs[j] = mc::sample_ppp(pico().tiers[j].bs_intensity, 100.0, rng);
        benchmark::DoNotOptimize(
            mc::associate(pico(), bs, hetnet::AccessMode::CudaMeanFading, rng));
    }
}
BENCHMARK(BM_AssociationDrop)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
