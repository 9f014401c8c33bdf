#include <benchmark/benchmark.h>

#include "asqkd/analysis.hpp"
#include "asqkd/attack_search.hpp"
#include "asqkd/hashing.hpp"
#include "asqkd/protocol.hpp"

using namespace asqkd;

static void BM_UniversalHash(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const BitString msg = BitString::random(n, rng);
    const HashKey key = select_hash(BitString::random(16, rng));
    for (auto _ : state) benchmark::DoNotOptimize(universal_hash(msg, key));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_UniversalHash)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_HonestSession(benchmark::State& state) {
    const SessionConfig config{static_cast<std::size_t>(state.range(0)), 8, 0};
    Rng rng(2);
    const PreSharedKeys keys = PreSharedKeys::random(config, rng);
    const BitString sk = BitString::random(config.n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(run_session(config, keys, sk, HonestChannel{}, rng));
}
BENCHMARK(BM_HonestSession)->Arg(8)->Arg(64);

static void BM_InterceptBatch(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch({8, 8, 3}, {}, InterceptResend{Basis::Z, 1.0}, 100));
    }
}
BENCHMARK(BM_InterceptBatch);

static void BM_CollectiveRoundAnalysis(benchmark::State& state) {
    const auto a = static_cast<std::size_t>(state.range(0));
    Rng rng(4);
    const std::size_t dim = std::size_t{4} << a;
    const Collective attack{random_unitary(dim, rng), random_unitary(dim, rng), a};
    for (auto _ : state) benchmark::DoNotOptimize(analyze_collective_round(attack));
}
BENCHMARK(BM_CollectiveRoundAnalysis)->DenseRange(1, 3);

static void BM_AttackSearchIteration(benchmark::State& state) {
    SearchParams p;
    p.ancilla_qubits = static_cast<std::size_t>(state.range(0));
    p.restarts = 1;
    p.max_iters = 10;
    for (auto _ : state) benchmark::DoNotOptimize(constrained_attack_search(p));
}
BENCHMARK(BM_AttackSearchIteration)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
