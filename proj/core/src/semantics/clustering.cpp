#include "fewscast/semantics/clustering.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/semantics/wmd.hpp"
#include "fewscast/tsstats/correlation.hpp"
#include "json.hpp"

namespace fewscast::semantics {

std::vector<double> pairwise_wmd(const std::vector<std::string>& features,
                                 const EmbeddingTable& embeddings) {
    const std::size_t n = features.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i * n + j] = d[j * n + i] = wmd(features[i], features[j], embeddings);
        }
    }
    return d;
}

std::vector<FeatureCluster> cluster_by_distance(const std::vector<std::string>& features,
                                                const std::vector<double>& distances,
                                                std::size_t k,
                                                const std::vector<std::string>& labels) {
    const std::size_t n = features.size();
    if (k == 0) throw ConfigError("cluster count must be positive");
    if (k > n) {
        throw ConfigError("cannot form " + std::to_string(k) + " clusters from " +
                          std::to_string(n) + " features");
    }
    if (distances.size() != n * n) throw DataError("distance matrix has wrong size");

    // Average linkage via the Lance-Williams update on a working copy.
    std::vector<double> d = distances;
    std::vector<std::size_t> sizes(n, 1);
    std::vector<bool> active(n, true);
    std::vector<std::size_t> owner(n);
    for (std::size_t i = 0; i < n; ++i) owner[i] = i;

    for (std::size_t clusters = n; clusters > k; --clusters) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && d[i * n + j] < best) {
                    best = d[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        const double wi = static_cast<double>(sizes[bi]), wj = static_cast<double>(sizes[bj]);
        for (std::size_t x = 0; x < n; ++x) {
            if (!active[x] || x == bi || x == bj) continue;
            const double merged = (wi * d[bi * n + x] + wj * d[bj * n + x]) / (wi + wj);
            d[bi * n + x] = d[x * n + bi] = merged;
        }
        sizes[bi] += sizes[bj];
        active[bj] = false;
        for (auto& o : owner) {
            if (o == bj) o = bi;
        }
    }

    // Representatives are each cluster's smallest member index, so ordering
    // clusters by representative orders them by earliest member.
    std::vector<FeatureCluster> out;
    std::vector<int> id_of(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (id_of[owner[i]] == 0) {
            id_of[owner[i]] = static_cast<int>(out.size()) + 1;
            FeatureCluster c;
            c.cluster_id = id_of[owner[i]];
            c.label = static_cast<std::size_t>(c.cluster_id) <= labels.size()
                          ? labels[c.cluster_id - 1]
                          : "cluster-" + std::to_string(c.cluster_id);
            out.push_back(std::move(c));
        }
        out[id_of[owner[i]] - 1].members.push_back(features[i]);
    }
    return out;
}

std::vector<FeatureCluster> cluster_features(const std::vector<std::string>& features,
                                             const EmbeddingTable& embeddings, std::size_t k,
                                             const std::vector<std::string>& labels) {
    if (k > features.size()) {
        throw ConfigError("cannot form " + std::to_string(k) + " clusters from " +
                          std::to_string(features.size()) + " features");
    }
    return cluster_by_distance(features, pairwise_wmd(features, embeddings), k, labels);
}

ClusterCorrelation cluster_validation(const std::vector<FeatureCluster>& clusters,
                                      const std::map<std::string, std::vector<double>>& series) {
    ClusterCorrelation out;
    struct Member {
        const std::vector<double>* values;
        int cluster;
    };
    std::vector<Member> members;
    for (const auto& c : clusters) {
        for (const auto& m : c.members) {
            auto it = series.find(m);
            if (it == series.end() || tsstats::is_constant(it->second)) {
                out.excluded.push_back(m);
                continue;
            }
            members.push_back({&it->second, c.cluster_id});
        }
    }
    double intra_sum = 0.0, inter_sum = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const double r = tsstats::pearson(*members[i].values, *members[j].values);
            if (members[i].cluster == members[j].cluster) {
                intra_sum += r;
                ++out.intra_pairs;
            } else {
                inter_sum += r;
                ++out.inter_pairs;
            }
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.intra = out.intra_pairs ? intra_sum / static_cast<double>(out.intra_pairs) : nan;
    out.inter = out.inter_pairs ? inter_sum / static_cast<double>(out.inter_pairs) : nan;
    return out;
}

void write_clusters_json(const std::filesystem::path& path,
                         const std::vector<FeatureCluster>& clusters) {
    auto arr = nlohmann::json::array();
    for (const auto& c : clusters) {
        arr.push_back({{"cluster_id", c.cluster_id}, {"label", c.label}, {"members", c.members}});
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << arr.dump(2) << '\n';
}

std::vector<FeatureCluster> read_clusters_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<FeatureCluster> out;
    try {
        for (const auto& j : nlohmann::json::parse(in)) {
            FeatureCluster c;
            c.cluster_id = j.at("cluster_id").get<int>();
            c.label = j.at("label").get<std::string>();
            c.members = j.at("members").get<std::vector<std::string>>();
            out.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return out;
}

void write_similarity_edges_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& features,
                                const std::vector<double>& distances, double max_distance) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"feature_a", "feature_b", "distance"});
    const std::size_t n = features.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distances[i * n + j] < max_distance) {
                w.field(features[i]).field(features[j]).field(distances[i * n + j]);
                w.end_row();
            }
        }
    }
}

void write_similarity_edges_dot(const std::filesystem::path& path,
                                const std::vector<std::string>& features,
                                const std::vector<double>& distances, double max_distance) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "graph features {\n";
    const std::size_t n = features.size();
    for (const auto& f : features) out << "  \"" << f << "\";\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distances[i * n + j] < max_distance) {
                out << "  \"" << features[i] << "\" -- \"" << features[j]
                    << "\" [len=" << csv::format_double(distances[i * n + j]) << "];\n";
            }
        }
    }
    out << "}\n";
}

}  // namespace fewscast::semantics
