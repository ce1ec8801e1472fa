#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fewscast/semantics/embedding.hpp"

namespace fewscast::semantics {

struct FeatureCluster {
    int cluster_id = 0;  ///< 1..k, ordered by each cluster's earliest member
    std::string label;
    std::vector<std::string> members;  ///< in input order
};

/// Symmetric matrix of pairwise WMD, row-major n x n.
std::vector<double> pairwise_wmd(const std::vector<std::string>& features,
                                 const EmbeddingTable& embeddings);

/// Average-linkage agglomerative clustering on pairwise WMD down to k clusters.
/// The closest pair merges first; ties go to the lowest (i, j) index pair.
/// `labels[c-1]` names cluster c when provided, otherwise "cluster-c".
std::vector<FeatureCluster> cluster_features(const std::vector<std::string>& features,
                                             const EmbeddingTable& embeddings, std::size_t k = 12,
                                             const std::vector<std::string>& labels = {});

/// Same, from a precomputed n x n distance matrix.
std::vector<FeatureCluster> cluster_by_distance(const std::vector<std::string>& features,
                                                const std::vector<double>& distances,
                                                std::size_t k,
                                                const std::vector<std::string>& labels = {});

struct ClusterCorrelation {
    double intra = 0.0;  ///< mean Pearson r over same-cluster pairs (NaN when none)
    double inter = 0.0;  ///< mean Pearson r over cross-cluster pairs (NaN when none)
    std::size_t intra_pairs = 0;
    std::size_t inter_pairs = 0;
    std::vector<std::string> excluded;  ///< constant or missing series
};

/// Mean pairwise correlation of the members' monthly factor series within and
/// across clusters.
ClusterCorrelation cluster_validation(const std::vector<FeatureCluster>& clusters,
                                      const std::map<std::string, std::vector<double>>& series);

void write_clusters_json(const std::filesystem::path& path,
                         const std::vector<FeatureCluster>& clusters);
std::vector<FeatureCluster> read_clusters_json(const std::filesystem::path& path);

/// Feature-similarity edges with distance below `max_distance`, for external
/// force-directed layout. CSV: feature_a,feature_b,distance.
void write_similarity_edges_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& features,
                                const std::vector<double>& distances, double max_distance);
void write_similarity_edges_dot(const std::filesystem::path& path,
                                const std::vector<std::string>& features,
                                const std::vector<double>& distances, double max_distance);

}  // namespace fewscast::semantics
