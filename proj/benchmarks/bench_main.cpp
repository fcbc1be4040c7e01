#include "fdyadic/dyadic.hpp"
#include "fdyadic/electric.hpp"
#include "fdyadic/graph.hpp"
#include "fdyadic/walk.hpp"

#include <benchmark/benchmark.h>

using namespace fdyadic;

static void BM_WordAction(benchmark::State& state) {
    BitWord w = BitWord::from_string("101");
    size_t i = 0;
    for (auto _ : state) {
        apply_word_inplace(kGenerators[i++ & 3], w);
        benchmark::DoNotOptimize(w.size());
        if (w.size() > 4096) w = BitWord::from_string("101");
    }
}
BENCHMARK(BM_WordAction);

static void BM_PackedAction(benchmark::State& state) {
    uint64_t code = BitWord::from_string("101").to_packed();
    size_t i = 0;
    for (auto _ : state) {
        code = apply_packed(kGenerators[i++ & 3], code);
        benchmark::DoNotOptimize(code);
        if (code >> 56) code = BitWord::from_string("101").to_packed();
    }
}
BENCHMARK(BM_PackedAction);

static void BM_BallBuild(benchmark::State& state) {
    BitWord half = BitWord::from_string("1");
    for (auto _ : state) {
        Ball ball = Ball::build(half, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(ball.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BallBuild)->Arg(12)->Arg(16)->Arg(20);

static void BM_FibonacciResistance(benchmark::State& state) {
    TypeRules fib = TypeRules::fibonacci();
    for (auto _ : state) {
        auto r = resistance_to_level(fib, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_FibonacciResistance)->Arg(20)->Arg(60);

static void BM_TreeWalk(benchmark::State& state) {
    WalkConfig config;
    config.walkers = 64;
    config.steps = static_cast<uint32_t>(state.range(0));
    config.seed = 5;
    config.threads = 1;
    TypeRules fib = TypeRules::fibonacci();
    for (auto _ : state) {
        auto est = run_escape_tree(fib, {}, config);
        benchmark::DoNotOptimize(est.estimate);
    }
    state.SetItemsProcessed(state.iterations() * config.walkers * config.steps);
}
BENCHMARK(BM_TreeWalk)->Arg(1000)->Arg(10000);

static void BM_GraphWalk(benchmark::State& state) {
    WalkConfig config;
    config.walkers = 64;
    config.steps = static_cast<uint32_t>(state.range(0));
    config.seed = 5;
    config.threads = 1;
    BitWord start = BitWord::from_string("101");
    for (auto _ : state) {
        auto est = run_escape_graph(start, config);
        benchmark::DoNotOptimize(est.estimate);
    }
    state.SetItemsProcessed(state.iterations() * config.walkers * config.steps);
}
BENCHMARK(BM_GraphWalk)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
