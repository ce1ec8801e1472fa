#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fewscast/frames/frame.hpp"
#include "fewscast/frames/lexicon.hpp"

namespace fewscast::frames {

enum class FeatureOrigin { FrameNews, FrameStudy, Expanded };

std::string_view to_string(FeatureOrigin o);
FeatureOrigin parse_origin(std::string_view text);

/// A candidate cause of food insecurity: a normalized 1-3 token n-gram.
struct TextFeature {
    std::string ngram;
    std::set<FeatureOrigin> provenance;
    std::size_t frame_count = 0;  ///< retained frames mentioning it
    std::optional<std::string> source_seed;  ///< expanded features only
    std::optional<double> seed_distance;     ///< expanded features only
};

/// All contiguous 1/2/3-grams of the frame's cause and effect constituents, in
/// order of first appearance, minus n-grams made only of stop words.
std::vector<TextFeature> extract_ngrams(const SemanticFrame& frame, const StopList& stop_list);

struct ExtractionConfig {
    TargetLexicon targets = TargetLexicon::defaults();
    CausalLinkSet links = CausalLinkSet::defaults();
    StopList stop_list = default_stop_list();
    /// Merge features whose stemmed forms coincide, keeping the first surface form.
    bool stem_dedup = false;
};

struct SeedSet {
    std::vector<TextFeature> features;
    std::size_t news_frames = 0;
    std::size_t study_frames = 0;
    std::size_t news_retained = 0;
    std::size_t study_retained = 0;
};

/// Filters both frame files and merges their n-grams. Features are deduplicated
/// by n-gram in first-seen order (news before study) with provenance unioned.
SeedSet run_extraction(std::span<const SemanticFrame> news_frames,
                       std::span<const SemanticFrame> study_frames,
                       const ExtractionConfig& config);

/// File form. An empty `study_path` means no study frames.
SeedSet run_extraction(const std::filesystem::path& news_path,
                       const std::filesystem::path& study_path, const ExtractionConfig& config);

/// JSON array of {ngram, provenance: [...], frame_count}.
void write_seeds_json(const std::filesystem::path& path, const std::vector<TextFeature>& seeds);
std::vector<TextFeature> read_seeds_json(const std::filesystem::path& path);

}  // namespace fewscast::frames
