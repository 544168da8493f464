#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "respkit/retrieval/retrieval.hpp"

namespace {

std::vector<std::string> paragraphs(std::size_t n) {
    static const char* vocab[] = {"retrieval", "dense", "sparse", "encoder", "training", "cost", "gpu",
                                  "baseline", "bm25", "ablation", "variance", "dataset", "query", "passage"};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(vocab) - 1);
    std::vector<std::string> out(n);
    for (auto& p : out)
        for (int w = 0; w < 80; ++w) p += std::string(vocab[pick(rng)]) + " ";
    return out;
}

void BM_Bm25Rank(benchmark::State& state) {
    auto docs = paragraphs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(respkit::retrieval::bm25_rank("training cost of the dense encoder", docs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Bm25Rank)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_RrfFuse(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::vector<std::vector<std::size_t>> lists(3, std::vector<std::size_t>(n));
    for (auto& l : lists) {
        std::iota(l.begin(), l.end(), 0);
        std::shuffle(l.begin(), l.end(), rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(respkit::retrieval::rrf_fuse(lists));
}
BENCHMARK(BM_RrfFuse)->Arg(64)->Arg(1024);

}  // namespace
