#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "respkit/align/fuzzy.hpp"
#include "respkit/align/triplet_align.hpp"

namespace {

std::string words(std::mt19937_64& rng, std::size_t n) {
    static const char* vocab[] = {"model", "baseline", "the", "we", "results", "table", "encoder", "training",
                                  "report", "dataset", "variance", "seeds"};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(vocab) - 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + std::string(vocab[pick(rng)]);
    return s;
}

void BM_PartialRatio(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto shorter = words(rng, 12);
    auto longer = words(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(respkit::align::partial_ratio(shorter, longer));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PartialRatio)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_BigramOverlap(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto a = words(rng, 20), b = words(rng, 40);
    for (auto _ : state) benchmark::DoNotOptimize(respkit::align::bigram_overlap(a, b));
}
BENCHMARK(BM_BigramOverlap);

}  // namespace
