#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fewscast/corpus/corpus_index.hpp"
#include "fewscast/semantics/embedding.hpp"
#include "fewscast/semantics/wmd.hpp"

namespace fewscast::semantics {

/// Every corpus unigram plus the bigrams and trigrams occurring strictly more than
/// `min_count` times. Sorted.
std::vector<std::string> enumerate_candidates(const corpus::CorpusIndex& index,
                                              std::size_t min_count = 1000);

struct ExpandedFeature {
    std::string ngram;
    std::string nearest_seed;
    double distance = 0.0;
};

struct ExpansionResult {
    std::vector<ExpandedFeature> features;  ///< in candidate order
    std::size_t skipped_candidates = 0;     ///< not embeddable
    std::size_t skipped_seeds = 0;
};

/// Candidates (other than the seeds themselves) whose WMD to the nearest seed is
/// strictly below `radius`. Ties between seeds go to the earlier seed.
ExpansionResult expand_seeds(const std::vector<std::string>& seeds,
                             const std::vector<std::string>& candidates,
                             const EmbeddingTable& embeddings, double radius = 6.0,
                             OovPolicy oov = OovPolicy::Error);

/// JSON array of {ngram, nearest_seed, distance}.
void write_expanded_json(const std::filesystem::path& path,
                         const std::vector<ExpandedFeature>& features);
std::vector<ExpandedFeature> read_expanded_json(const std::filesystem::path& path);

}  // namespace fewscast::semantics
