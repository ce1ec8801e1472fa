#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fewscast/common/month.hpp"

namespace fewscast::pipeline {

struct PlantedFeature {
    std::string ngram;
    int lead = 3;         ///< months by which mentions run ahead of the latent crisis state
    double effect = 0.9;  ///< added mention probability at full crisis intensity
    std::vector<std::string> near_terms;  ///< co-mentioned near-synonyms, embedded close by
};

struct SyntheticSpec {
    std::size_t districts = 40;
    std::size_t months = 120;
    Month first{2010, 1};
    std::size_t districts_per_province = 2;
    std::size_t provinces_per_country = 2;

    std::vector<PlantedFeature> planted = default_planted();
    /// Crisis-coverage terms: mentioned while a crisis is under way, without lead.
    std::vector<std::string> coverage = default_coverage();
    double coverage_effect = 0.35;
    double near_term_share = 0.0;  ///< chance a near term accompanies a mention of its feature
    std::size_t decoys = 40;
    std::size_t clusters = 3;  ///< k written to the generated config

    std::size_t articles_per_district = 12;  ///< per month
    std::size_t country_articles = 12;       ///< per country-month, no district named
    double base_rate = 0.03;                 ///< mention probability outside crises

    double episode_rate = 0.035;  ///< monthly crisis onset probability in calm districts
    int min_episode_months = 7;
    int max_episode_months = 14;
    int min_calm_months = 5;
    double unheralded_share = 0.1;  ///< crises the planted features do not announce
    double calm_flip_rate = 0.01;   ///< monthly chance a calm district moves between phases 1 and 2

    std::size_t indicators = 9;
    double indicator_noise = 0.5;
    double missing_indicator_share = 0.0005;

    double expert_hit_rate = 0.65;  ///< chance a projection anticipates the next phase

    static std::vector<PlantedFeature> default_planted();
    static std::vector<std::string> default_coverage();
};

struct SyntheticOutput {
    std::filesystem::path directory;
    std::filesystem::path corpus;
    std::filesystem::path news_frames;
    std::filesystem::path study_frames;
    std::filesystem::path embeddings;
    std::filesystem::path gazetteer;
    std::filesystem::path panel;
    std::filesystem::path projections;
    std::filesystem::path ground_truth;
    std::filesystem::path config;
};

/// IPC publication months: every four months (Feb, Jun, Oct) through 2015,
/// quarterly (Jan, Apr, Jul, Oct) from 2016.
bool is_publication_month(Month m);

/// Writes a complete synthetic input set plus `ground_truth.json` and a
/// ready-to-run `config.ini` into `directory`. Spec-invalid inputs are a ConfigError.
SyntheticOutput generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                   const std::filesystem::path& directory);

/// Ground truth as written by generate_synthetic.
struct GroundTruth {
    std::vector<PlantedFeature> planted;
    std::vector<std::string> derived;   ///< sub-grams and near terms of planted features
    std::vector<std::string> coverage;
    std::vector<std::string> decoys;    ///< decoys and their near terms
    struct Outbreak {
        std::string district_id;
        Month period;
        int severity = 0;
    };
    std::vector<Outbreak> outbreaks;
};

GroundTruth read_ground_truth(const std::filesystem::path& path);

}  // namespace fewscast::pipeline
