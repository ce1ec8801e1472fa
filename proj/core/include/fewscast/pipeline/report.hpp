#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fewscast/outbreak/outbreak.hpp"
#include "fewscast/pipeline/config.hpp"

namespace fewscast::pipeline {

/// Mean of the last `window` values at each position; NaN while fewer than
/// `window` values are available or when any of them is NaN.
std::vector<double> trailing_mean(std::span<const double> series, std::size_t window = 3);

/// Month-wise mean of equally long member series, NaN where any member is NaN.
std::vector<double> cluster_aggregate(const std::vector<std::vector<double>>& members);

/// Percentile ranks of the finite entries of a series; NaN entries stay NaN.
std::vector<double> series_percentiles(std::span<const double> series);

enum class CoverageBucket { AllPredicted, Missed, NoOutbreaks };
std::string_view to_string(CoverageBucket bucket);

struct ProvinceCoverage {
    std::string province;
    std::string country;
    std::size_t articles = 0;  ///< articles matched to the province
    std::size_t outbreaks = 0;
    std::size_t detected = 0;
    CoverageBucket bucket = CoverageBucket::NoOutbreaks;
};

/// Splits provinces by whether every actual outbreak in their districts was
/// matched by a predicted one. `district_province[i]` names the province of
/// `district_ids[i]`.
std::vector<ProvinceCoverage> coverage_split(
    const std::vector<std::string>& district_ids, const std::vector<std::string>& district_province,
    const std::vector<std::string>& district_country,
    const std::vector<std::pair<std::string, std::size_t>>& province_articles,
    const std::vector<outbreak::OutbreakEvent>& actual,
    const std::vector<outbreak::OutbreakEvent>& predicted, std::size_t window = 0);

struct ReportSummary {
    std::vector<std::string> files;  ///< written, relative to the report directory
    std::vector<std::string> gaps;   ///< report items skipped for lack of inputs
};

/// Builds the CSV/DOT bundle from whatever stage outputs exist under `run_dir`.
ReportSummary write_report(const PipelineConfig& config, const std::filesystem::path& run_dir,
                           const std::filesystem::path& out_dir);

}  // namespace fewscast::pipeline
