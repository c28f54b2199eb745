#include <benchmark/benchmark.h>

#include <random>

#include "../tests/unit/fixtures.hpp"
#include "../tests/unit/test_support.hpp"
#include "ncrg/forests.hpp"
#include "ncrg/kernels.hpp"
#include "ncrg/moyal.hpp"
#include "ncrg/multiscale.hpp"
#include "ncrg/ribbon.hpp"
#include "ncrg/rosette.hpp"

using namespace ncrg;
using namespace ncrg::testing;

static void BM_topology(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto g = random_graph(rng, static_cast<int>(state.range(0)), 4, false);
    for (auto _ : state) benchmark::DoNotOptimize(topology(g));
}
BENCHMARK(BM_topology)->Arg(4)->Arg(8);

static void BM_rosette(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto g = random_graph(rng, static_cast<int>(state.range(0)), 4, true);
    auto og = orient(g, spanning_tree(g, TreeMode::Maximize), default_root(g));
    for (auto _ : state) benchmark::DoNotOptimize(rosette(og));
}
BENCHMARK(BM_rosette)->Arg(3)->Arg(5);

static void BM_oracle_sample(benchmark::State& state) {
    std::mt19937_64 rng(3);
    auto g = random_graph(rng, 5, 4, true);
    auto og = orient(g, spanning_tree(g, TreeMode::Maximize), default_root(g));
    auto rf = rosette(og);
    for (auto _ : state) {
        auto s = make_sample(og, rng);
        benchmark::DoNotOptimize(phase_oracle(og, s) - eval_phase(og, rf.phase, s));
    }
}
BENCHMARK(BM_oracle_sample);

static void BM_forest_enumeration(benchmark::State& state) {
    auto g = eye_graph();
    for (auto _ : state) {
        auto subs = divergent_subgraphs(g);
        benchmark::DoNotOptimize(all_forests(subs));
    }
}
BENCHMARK(BM_forest_enumeration);

static void BM_matrix_propagator(benchmark::State& state) {
    KernelParams p;
    int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(matrix_propagator(MatrixIndex4::d2(k, k, k, k), p, 4));
}
BENCHMARK(BM_matrix_propagator)->Arg(8)->Arg(64)->Arg(512);

static void BM_gn_matrix_slice(benchmark::State& state) {
    KernelParams p;
    int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gn_matrix_slice(k, k, k, k, 4, p));
}
BENCHMARK(BM_gn_matrix_slice)->Arg(64)->Arg(512);

static void BM_fmn_eval(benchmark::State& state) {
    Vec2 x{{0.4, -0.3}};
    for (auto _ : state) benchmark::DoNotOptimize(fmn_eval(12, 9, x, 1.0));
}
BENCHMARK(BM_fmn_eval);

BENCHMARK_MAIN();
