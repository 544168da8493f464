#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "respkit/eval/control.hpp"

namespace {

void BM_OrderFidelity(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> v(-1, 40);
    std::vector<int> m(static_cast<std::size_t>(state.range(0)));
    for (auto& x : m) x = v(rng);
    for (auto _ : state) benchmark::DoNotOptimize(respkit::eval::order_fidelity(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OrderFidelity)->RangeMultiplier(4)->Range(8, 512)->Complexity();

}  // namespace
