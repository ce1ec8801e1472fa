#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fewscast/outbreak/outbreak.hpp"

using namespace fewscast;

static void BM_SweepPareto(benchmark::State& state) {
    const auto districts = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1.0, 5.0);
    std::normal_distribution<double> z(0.0, 0.5);
    outbreak::PeriodPanel phases, preds;
    for (std::size_t d = 0; d < districts; ++d) {
        phases.district_ids.push_back("D" + std::to_string(d));
        phases.countries.push_back("X");
        phases.values.emplace_back();
        preds.values.emplace_back();
        for (int t = 0; t < 40; ++t) {
            phases.values.back().push_back(std::round(u(rng)));
            preds.values.back().push_back(phases.values.back().back() + z(rng));
        }
    }
    for (int t = 0; t < 40; ++t) phases.periods.push_back(Month(2010, 2) + 4 * t);
    preds.district_ids = phases.district_ids;
    preds.countries = phases.countries;
    preds.periods = phases.periods;
    const auto actual = outbreak::detect_outbreaks(phases);
    for (auto _ : state) benchmark::DoNotOptimize(outbreak::sweep_pareto(preds, actual).size());
}
BENCHMARK(BM_SweepPareto)->Arg(40)->Arg(400);
