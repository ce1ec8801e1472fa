#include "fewscast/frames/extraction.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/frames/porter.hpp"
#include "json.hpp"

namespace fewscast::frames {

std::string_view to_string(FeatureOrigin o) {
    switch (o) {
        case FeatureOrigin::FrameNews: return "frame-news";
        case FeatureOrigin::FrameStudy: return "frame-study";
        case FeatureOrigin::Expanded: return "expanded";
    }
    return "expanded";
}

FeatureOrigin parse_origin(std::string_view text) {
    if (text == "frame-news") return FeatureOrigin::FrameNews;
    if (text == "frame-study") return FeatureOrigin::FrameStudy;
    if (text == "expanded") return FeatureOrigin::Expanded;
    throw DataError("unknown feature provenance '" + std::string(text) + "'");
}

std::vector<TextFeature> extract_ngrams(const SemanticFrame& frame, const StopList& stop_list) {
    const auto origin = frame.provenance == Provenance::News ? FeatureOrigin::FrameNews
                                                             : FeatureOrigin::FrameStudy;
    std::vector<TextFeature> out;
    std::set<std::string, std::less<>> seen;
    for (const auto& c : frame.constituents) {
        if (!c.is_cause() && !c.is_effect()) continue;
        const std::span<const std::string> tokens(c.tokens);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            for (std::size_t n = 1; n <= 3 && i + n <= tokens.size(); ++n) {
                const auto gram = tokens.subspan(i, n);
                const bool stop_only = std::all_of(gram.begin(), gram.end(), [&](const auto& t) {
                    return stop_list.count(t) > 0;
                });
                if (stop_only) continue;
                auto joined = text::join(gram);
                if (!seen.insert(joined).second) continue;
                TextFeature f;
                f.ngram = std::move(joined);
                f.provenance = {origin};
                f.frame_count = 1;
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

SeedSet run_extraction(std::span<const SemanticFrame> news_frames,
                       std::span<const SemanticFrame> study_frames,
                       const ExtractionConfig& config) {
    SeedSet seeds;
    seeds.news_frames = news_frames.size();
    seeds.study_frames = study_frames.size();

    std::map<std::string, std::size_t, std::less<>> slot;
    const auto merge = [&](std::span<const SemanticFrame> frames, std::size_t& retained) {
        for (const auto& frame : filter_frames(frames, config.targets, config.links)) {
            ++retained;
            for (auto& f : extract_ngrams(frame, config.stop_list)) {
                std::string key = f.ngram;
                if (config.stem_dedup) key = text::join(stem_all(text::split(f.ngram)));
                auto [it, inserted] = slot.emplace(key, seeds.features.size());
                if (inserted) {
                    seeds.features.push_back(std::move(f));
                } else {
                    auto& existing = seeds.features[it->second];
                    existing.provenance.insert(f.provenance.begin(), f.provenance.end());
                    existing.frame_count += f.frame_count;
                }
            }
        }
    };
    merge(news_frames, seeds.news_retained);
    merge(study_frames, seeds.study_retained);
    return seeds;
}

SeedSet run_extraction(const std::filesystem::path& news_path,
                       const std::filesystem::path& study_path, const ExtractionConfig& config) {
    const auto news = read_frames(news_path);
    std::vector<SemanticFrame> study;
    if (!study_path.empty()) study = read_frames(study_path);
    return run_extraction(news, study, config);
}

void write_seeds_json(const std::filesystem::path& path, const std::vector<TextFeature>& seeds) {
    auto arr = nlohmann::json::array();
    for (const auto& f : seeds) {
        nlohmann::json j;
        j["ngram"] = f.ngram;
        auto prov = nlohmann::json::array();
        for (auto o : f.provenance) prov.push_back(std::string(to_string(o)));
        j["provenance"] = prov;
        j["frame_count"] = f.frame_count;
        if (f.source_seed) j["nearest_seed"] = *f.source_seed;
        if (f.seed_distance) j["distance"] = *f.seed_distance;
        arr.push_back(std::move(j));
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << arr.dump(2) << '\n';
}

std::vector<TextFeature> read_seeds_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<TextFeature> out;
    try {
        const auto arr = nlohmann::json::parse(in);
        for (const auto& j : arr) {
            TextFeature f;
            f.ngram = j.at("ngram").get<std::string>();
            for (const auto& p : j.at("provenance")) f.provenance.insert(parse_origin(p.get<std::string>()));
            f.frame_count = j.value("frame_count", std::size_t{0});
            if (j.contains("nearest_seed")) f.source_seed = j.at("nearest_seed").get<std::string>();
            if (j.contains("distance")) f.seed_distance = j.at("distance").get<double>();
            out.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return out;
}

}  // namespace fewscast::frames
