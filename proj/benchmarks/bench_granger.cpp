#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fewscast/tsstats/screening.hpp"

using namespace fewscast;

static void BM_ScreenFeature(benchmark::State& state) {
    const auto districts = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> y(districts, std::vector<double>(120)), x = y;
    for (std::size_t d = 0; d < districts; ++d) {
        for (std::size_t t = 0; t < 120; ++t) x[d][t] = z(rng);
        for (std::size_t t = 2; t < 120; ++t) y[d][t] = 0.5 * y[d][t - 1] + 0.3 * x[d][t - 2] + z(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(tsstats::screen_feature("f", y, x).f);
}
BENCHMARK(BM_ScreenFeature)->Arg(1)->Arg(40);
