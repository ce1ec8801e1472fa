#include "fewscast/semantics/expansion.hpp"

#include <fstream>
#include <limits>
#include <set>

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "json.hpp"

namespace fewscast::semantics {

std::vector<std::string> enumerate_candidates(const corpus::CorpusIndex& index,
                                              std::size_t min_count) {
    std::vector<std::string> out = index.vocabulary();
    for (std::size_t n : {2, 3}) {
        for (const auto& [gram, count] : index.ngram_counts(n)) {
            if (count > min_count) out.push_back(gram);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool usable(const std::string& phrase, const EmbeddingTable& emb, OovPolicy oov) {
    const auto tokens = text::split(phrase);
    if (tokens.empty() || tokens.size() > 3) return false;
    std::size_t known = 0;
    for (const auto& t : tokens) known += emb.contains(t) ? 1 : 0;
    return oov == OovPolicy::Skip ? known > 0 : known == tokens.size();
}

}  // namespace

ExpansionResult expand_seeds(const std::vector<std::string>& seeds,
                             const std::vector<std::string>& candidates,
                             const EmbeddingTable& embeddings, double radius, OovPolicy oov) {
    ExpansionResult result;
    std::vector<std::vector<std::string>> seed_tokens;
    std::vector<const std::string*> seed_names;
    const std::set<std::string> seed_set(seeds.begin(), seeds.end());
    for (const auto& s : seeds) {
        if (!usable(s, embeddings, oov)) {
            ++result.skipped_seeds;
            continue;
        }
        seed_tokens.push_back(text::split(s));
        seed_names.push_back(&s);
    }
    for (const auto& c : candidates) {
        if (seed_set.count(c)) continue;
        if (!usable(c, embeddings, oov)) {
            ++result.skipped_candidates;
            continue;
        }
        const auto tokens = text::split(c);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_seed = 0;
        for (std::size_t s = 0; s < seed_tokens.size(); ++s) {
            const double d = wmd_plan(tokens, seed_tokens[s], embeddings, oov).cost;
            if (d < best) {
                best = d;
                best_seed = s;
            }
        }
        if (best < radius) result.features.push_back({c, *seed_names[best_seed], best});
    }
    return result;
}

void write_expanded_json(const std::filesystem::path& path,
                         const std::vector<ExpandedFeature>& features) {
    auto arr = nlohmann::json::array();
    for (const auto& f : features) {
        arr.push_back({{"ngram", f.ngram}, {"nearest_seed", f.nearest_seed}, {"distance", f.distance}});
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << arr.dump(2) << '\n';
}

std::vector<ExpandedFeature> read_expanded_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<ExpandedFeature> out;
    try {
        for (const auto& j : nlohmann::json::parse(in)) {
            out.push_back({j.at("ngram").get<std::string>(), j.at("nearest_seed").get<std::string>(),
                           j.at("distance").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return out;
}

}  // namespace fewscast::semantics
