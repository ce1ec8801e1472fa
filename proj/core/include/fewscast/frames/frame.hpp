#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fewscast/frames/lexicon.hpp"

namespace fewscast::frames {

enum class Provenance { News, Study };

std::string_view to_string(Provenance p);

struct Constituent {
    std::vector<std::string> tokens;
    std::string role;  ///< "cause", "effect" or any other label

    [[nodiscard]] bool is_cause() const;
    [[nodiscard]] bool is_effect() const;
};

struct SemanticFrame {
    std::string frame_label;
    std::vector<Constituent> constituents;
    std::string doc_id;
    int sentence_index = 0;
    Provenance provenance = Provenance::News;
};

/// Reads one frame per line:
/// {doc_id, sentence_index, frame_label, constituents: [{role, tokens: [...]}], provenance}.
/// Tokens are normalized on load. Throws DataError with the line number on bad input.
std::vector<SemanticFrame> read_frames(const std::filesystem::path& path);

/// Where the causal-link filter found its trigger.
enum class LinkSource { None, Label, Text, Both };

std::string_view to_string(LinkSource s);

struct FilterOutcome {
    bool has_cause_and_effect = false;
    bool effect_has_target = false;
    LinkSource link = LinkSource::None;

    [[nodiscard]] bool retained() const {
        return has_cause_and_effect && effect_has_target && link != LinkSource::None;
    }
};

/// Evaluates the three frame filters independently.
FilterOutcome evaluate_frame(const SemanticFrame& frame, const TargetLexicon& targets,
                             const CausalLinkSet& links);

/// Frames passing all three filters, in input order.
std::vector<SemanticFrame> filter_frames(std::span<const SemanticFrame> frames,
                                         const TargetLexicon& targets, const CausalLinkSet& links);

}  // namespace fewscast::frames
