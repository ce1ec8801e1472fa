#include "fewscast/frames/frame.hpp"

#include <fstream>

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/frames/porter.hpp"
#include "json.hpp"

namespace fewscast::frames {

std::string_view to_string(Provenance p) { return p == Provenance::News ? "news" : "study"; }

std::string_view to_string(LinkSource s) {
    switch (s) {
        case LinkSource::None: return "none";
        case LinkSource::Label: return "label";
        case LinkSource::Text: return "text";
        case LinkSource::Both: return "both";
    }
    return "none";
}

bool Constituent::is_cause() const { return text::normalize_token(role) == "cause"; }
bool Constituent::is_effect() const { return text::normalize_token(role) == "effect"; }

std::vector<SemanticFrame> read_frames(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open frame file " + path.string());
    std::vector<SemanticFrame> frames;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        try {
            const auto j = nlohmann::json::parse(line);
            SemanticFrame f;
            f.doc_id = j.at("doc_id").get<std::string>();
            f.sentence_index = j.at("sentence_index").get<int>();
            f.frame_label = j.at("frame_label").get<std::string>();
            if (f.frame_label.empty()) throw DataError("empty frame_label");
            const auto prov = j.at("provenance").get<std::string>();
            if (prov == "news") {
                f.provenance = Provenance::News;
            } else if (prov == "study") {
                f.provenance = Provenance::Study;
            } else {
                throw DataError("unknown provenance '" + prov + "'");
            }
            for (const auto& c : j.at("constituents")) {
                Constituent con;
                con.role = c.at("role").get<std::string>();
                for (const auto& t : c.at("tokens")) {
                    auto norm = text::normalize_token(t.get<std::string>());
                    if (!norm.empty()) con.tokens.push_back(std::move(norm));
                }
                f.constituents.push_back(std::move(con));
            }
            if (f.constituents.empty()) throw DataError("frame has no constituents");
            frames.push_back(std::move(f));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return frames;
}

FilterOutcome evaluate_frame(const SemanticFrame& frame, const TargetLexicon& targets,
                             const CausalLinkSet& links) {
    FilterOutcome out;
    bool cause = false;
    bool effect = false;
    bool text_link = false;
    for (const auto& c : frame.constituents) {
        const auto stemmed = stem_all(c.tokens);
        if (c.is_cause()) cause = true;
        if (c.is_effect()) {
            effect = true;
            if (targets.matches_stemmed(stemmed)) out.effect_has_target = true;
        }
        if (links.matches_stemmed(stemmed)) text_link = true;
    }
    out.has_cause_and_effect = cause && effect;

    const auto label_stems = stem_all(text::tokenize(frame.frame_label));
    const bool label_link = links.matches_stemmed(label_stems);
    if (label_link && text_link) {
        out.link = LinkSource::Both;
    } else if (label_link) {
        out.link = LinkSource::Label;
    } else if (text_link) {
        out.link = LinkSource::Text;
    }
    return out;
}

std::vector<SemanticFrame> filter_frames(std::span<const SemanticFrame> frames,
                                         const TargetLexicon& targets,
                                         const CausalLinkSet& links) {
    std::vector<SemanticFrame> out;
    for (const auto& f : frames) {
        if (evaluate_frame(f, targets, links).retained()) out.push_back(f);
    }
    return out;
}

}  // namespace fewscast::frames
