#include <benchmark/benchmark.h>

#include <random>

#include "fewscast/panel/model.hpp"
#include "fewscast/tsstats/ols.hpp"

using namespace fewscast;

namespace {

void fill(Eigen::MatrixXd& X, Eigen::VectorXd& y) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = z(rng);
    X.col(0).setOnes();
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = X(i, 1) - 0.5 * X(i, 2) + z(rng);
}

}  // namespace

static void BM_Ols(benchmark::State& state) {
    const auto n = state.range(0), k = state.range(1);
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd y(n);
    fill(X, y);
    for (auto _ : state) benchmark::DoNotOptimize(tsstats::ols(X, y, false).rss);
}
BENCHMARK(BM_Ols)->Args({500, 20})->Args({4000, 300});

static void BM_Lasso(benchmark::State& state) {
    const auto n = state.range(0), k = state.range(1);
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd y(n);
    fill(X, y);
    std::vector<bool> pen(static_cast<std::size_t>(k), true);
    pen[0] = false;
    for (auto _ : state) benchmark::DoNotOptimize(panel::lasso(X, y, 0.05, pen).beta(0));
}
BENCHMARK(BM_Lasso)->Args({500, 20})->Args({4000, 300});
