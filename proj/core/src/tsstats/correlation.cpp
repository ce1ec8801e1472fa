#include "fewscast/tsstats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fewscast/common/error.hpp"

namespace fewscast::tsstats {

bool is_constant(std::span<const double> values) {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) ==
           values.end();
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::vector<double> percentile_ranks(std::span<const double> values) {
    auto ranks = average_ranks(values);
    if (ranks.size() < 2) return std::vector<double>(ranks.size(), 0.0);
    const double denom = static_cast<double>(ranks.size() - 1);
    for (auto& r : ranks) r /= denom;
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("correlation inputs differ in length");
    if (a.size() < 2) throw DataError("correlation needs at least 2 points");
    if (is_constant(a) || is_constant(b)) throw DataError("correlation of a constant vector");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("spearman inputs differ in length");
    if (a.size() < 3) throw DataError("spearman needs at least 3 points");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

}  // namespace fewscast::tsstats
