#pragma once

#include <span>
#include <vector>

namespace fewscast::tsstats {

bool is_constant(std::span<const double> values);

/// 0-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// rank / (N - 1), so the smallest value maps to 0 and the largest to 1.
std::vector<double> percentile_ranks(std::span<const double> values);

/// Throws DataError on length mismatch, fewer than 2 points, or a constant input.
double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson correlation of average ranks. Needs at least 3 points.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace fewscast::tsstats
