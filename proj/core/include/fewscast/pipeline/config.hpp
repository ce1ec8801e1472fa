#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fewscast/common/month.hpp"
#include "fewscast/corpus/news_factor.hpp"
#include "fewscast/tsstats/screening.hpp"

namespace fewscast::pipeline {

struct PathsConfig {
    std::filesystem::path corpus;
    std::filesystem::path news_frames;
    std::filesystem::path study_frames;  ///< optional
    std::filesystem::path embeddings;
    std::filesystem::path gazetteer;
    std::filesystem::path panel;
    std::filesystem::path projections;  ///< optional expert projections
    std::filesystem::path output = "run";
};

struct PipelineConfig {
    PathsConfig paths;

    DateWindow window{{2009, 7, 1}, {2020, 2, 29}};
    corpus::Denominator denominator = corpus::Denominator::Country;
    bool exclude_target_articles = false;
    bool strict = false;

    std::vector<std::string> target_keywords;  ///< empty: the 13 defaults
    std::vector<std::string> causal_links;     ///< empty: the 41 defaults
    bool stem_dedup = false;

    double wmd_radius = 6.0;
    std::size_t ngram_min_count = 1000;

    tsstats::ScreeningOptions screening;

    std::size_t clusters = 12;
    double edge_max_distance = 6.0;

    std::size_t folds = 10;
    std::optional<double> lasso_lambda;
    bool spatial = true;
    bool country_slopes = false;

    double grid_min = 1.0;
    double grid_max = 5.0;
    bool crossed_thresholds = false;
    std::size_t match_window = 0;
    double precision_target = 0.80;

    std::uint64_t seed = 42;
    bool trailing_mean = true;
};

/// Reads an INI file with sections paths, corpus, frames, expansion, screening,
/// clustering, model, outbreak and run. Missing keys keep their defaults;
/// relative paths resolve against the file's directory. Unknown sections or
/// keys and out-of-range values are a ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks numeric ranges; with `check_paths`, also that every required input exists.
void validate_config(const PipelineConfig& config, bool check_paths);

void write_config(const std::filesystem::path& path, const PipelineConfig& config);

/// Canonical text of the settings a stage depends on, for manifest hashing.
std::string config_fingerprint(const PipelineConfig& config, std::string_view stage);

}  // namespace fewscast::pipeline
