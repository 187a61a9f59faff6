#include <benchmark/benchmark.h>

#include <random>

#include "mpxbp/bp.hpp"
#include "mpxbp/check.hpp"
#include "mpxbp/generate.hpp"
#include "mpxbp/harness.hpp"
#include "mpxbp/metrics.hpp"

using namespace mpx;

static void BM_CheckTableBuild(benchmark::State& state) {
    int q = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_check_table(q, 0.2, 0.8));
}
BENCHMARK(BM_CheckTableBuild)->Arg(2)->Arg(4)->Arg(6);

static void BM_GlobalWppCheck(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    Labeling t = structure_to_labeling(heterogeneous2_structure(N));
    for (auto _ : state) benchmark::DoNotOptimize(wpp_check_global(t));
    state.SetComplexityN(N);
}
BENCHMARK(BM_GlobalWppCheck)->Arg(100)->Arg(200)->Arg(400)->Complexity();

static void BM_LocalConstraintScore(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    Labeling t = structure_to_labeling(heterogeneous2_structure(N));
    for (Label& lab : t.t)
        if (lab == kNoLabel) lab = 1;
    for (auto _ : state) benchmark::DoNotOptimize(local_constraint_score(t));
}
BENCHMARK(BM_LocalConstraintScore)->Arg(100)->Arg(200);

static void BM_NormalizedAgreement(benchmark::State& state) {
    Labeling truth = structure_to_labeling(heterogeneous2_structure(200));
    Labeling pred = truth;
    std::mt19937 rng(3);
    for (Label& lab : pred.t)
        if (lab != kNoLabel && rng() % 10 == 0) lab = 1 + static_cast<Label>(rng() % 4);
    std::vector<double> n = {0.5, 0.25, 0.125, 0.125};
    for (auto _ : state) benchmark::DoNotOptimize(normalized_agreement(truth, pred, n));
}
BENCHMARK(BM_NormalizedAgreement);

struct SweepFixture {
    MultiplexNetwork net;
    SbmParams params;
    Labeling truth;

    SweepFixture(int N, double degree) {
        auto aff = BenchmarkAffinity::from_epsilon_degree(0.2, degree, 2);
        auto pair = generate_multiplex_wpp(homogeneous2_structure(N), aff, 17);
        net = pair.first;
        truth = pair.second;
        params = aff.expand(2, N);
    }
};

static void BM_SweepSingle(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    SweepFixture fx(N, 5.0);
    MultiplexNetwork one;
    one.N = N;
    one.L = 1;
    one.layers = {fx.net.layers[0]};
    BpConfig cfg;
    BpEngine engine(one, fx.params, cfg, Model::single);
    engine.init_state();
    for (auto _ : state) benchmark::DoNotOptimize(engine.sweep());
    state.SetComplexityN(N);
}
BENCHMARK(BM_SweepSingle)->Arg(200)->Arg(400)->Arg(800)->Complexity();

static void BM_SweepConstrained(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    double n_sample = state.range(1) / 100.0;
    SweepFixture fx(N, 5.0);
    BpConfig cfg;
    cfg.n_sample = n_sample;
    BpEngine engine(fx.net, fx.params, cfg, Model::constrained);
    engine.init_state();
    for (auto _ : state) benchmark::DoNotOptimize(engine.sweep());
}
BENCHMARK(BM_SweepConstrained)
    ->Args({200, 2})
    ->Args({200, 5})
    ->Args({200, 20})
    ->Args({400, 5});

static void BM_SweepCorrelated(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    SweepFixture fx(N, 5.0);
    BpConfig cfg;
    BpEngine engine(fx.net, fx.params, cfg, Model::correlated);
    engine.init_state();
    for (auto _ : state) benchmark::DoNotOptimize(engine.sweep());
}
BENCHMARK(BM_SweepCorrelated)->Arg(200)->Arg(400);

static void BM_FactorContribution(benchmark::State& state) {
    SweepFixture fx(60, 5.0);
    BpConfig cfg;
    BpEngine engine(fx.net, fx.params, cfg, Model::constrained);
    engine.init_state();
    double f[8];
    for (auto _ : state) {
        engine.factor_contribution(0, 1, 3, 7, f);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_FactorContribution);

BENCHMARK_MAIN();
