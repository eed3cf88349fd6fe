#include <benchmark/benchmark.h>

#include "dsdetect/asymptotics.hpp"
#include "dsdetect/exact.hpp"
#include "dsdetect/montecarlo.hpp"

using namespace dsdetect;

namespace {

SystemParams params(std::int64_t N, std::int64_t Ns) {
    SystemParams p;
    p.N = N;
    p.Ns = Ns;
    p.P = 10.0;
    p.m = 1.0;
    p.sigma_v2 = 1.0;
    p.sigma_w2 = 1.0;
    return p;
}

void BM_QuadraticForm(benchmark::State& state) {
    const auto N = state.range(0);
    const auto model = ChannelModel::from_params(params(N, N), SpreadingMatrix::generate(N, N, 1));
    for (auto _ : state) benchmark::DoNotOptimize(quadratic_form(model));
}
BENCHMARK(BM_QuadraticForm)->RangeMultiplier(4)->Range(8, 512);

void BM_MonteCarloTrials(benchmark::State& state) {
    const auto N = state.range(0);
    const auto p = params(N, N);
    const auto S = SpreadingMatrix::generate(N, N, 1);
    McConfig mc;
    mc.trials_per_hypothesis = 20000;
    mc.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(estimate(p, S, DetectorSpec::bayes(), mc).pe);
    state.SetItemsProcessed(state.iterations() * 2 * static_cast<std::int64_t>(mc.trials_per_hypothesis));
}
BENCHMARK(BM_MonteCarloTrials)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Beta0(benchmark::State& state) {
    double alpha = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta0(alpha, 0.5, 1.0));
        alpha = alpha < 8.0 ? alpha * 1.01 : 0.5;
    }
}
BENCHMARK(BM_Beta0);

void BM_GenerateSpreading(benchmark::State& state) {
    const auto N = state.range(0);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(SpreadingMatrix::generate(N, N, ++seed));
}
BENCHMARK(BM_GenerateSpreading)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
