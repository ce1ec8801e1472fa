#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fewscast/semantics/wmd.hpp"

using namespace fewscast;

static void BM_WmdThreeByThree(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    semantics::EmbeddingTable table(dim);
    for (const char* w : {"crop", "failure", "poor", "harvest", "rain", "deficit"}) {
        std::vector<double> v(dim);
        for (auto& x : v) x = z(rng);
        table.insert(w, v);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(semantics::wmd("crop failure poor", "harvest rain deficit", table));
    }
}
BENCHMARK(BM_WmdThreeByThree)->Arg(8)->Arg(300);
