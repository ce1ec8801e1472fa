#include "fewscast/frames/lexicon.hpp"

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/frames/porter.hpp"

namespace fewscast::frames {

namespace {

std::vector<std::vector<std::string>> stem_phrases(const std::vector<std::string>& phrases,
                                                   std::string_view what) {
    if (phrases.empty()) throw ConfigError(std::string(what) + " list is empty");
    std::vector<std::vector<std::string>> roots;
    for (const auto& p : phrases) {
        auto tokens = text::tokenize(p);
        if (tokens.empty()) throw ConfigError(std::string(what) + " '" + p + "' has no tokens");
        roots.push_back(stem_all(tokens));
    }
    return roots;
}

bool any_root_in(const std::vector<std::vector<std::string>>& roots,
                 std::span<const std::string> stemmed) {
    for (const auto& r : roots) {
        if (text::contains_subsequence(stemmed, r)) return true;
    }
    return false;
}

}  // namespace

TargetLexicon::TargetLexicon(std::vector<std::string> keywords)
    : keywords_(std::move(keywords)), roots_(stem_phrases(keywords_, "target keyword")) {}

TargetLexicon TargetLexicon::defaults() {
    return TargetLexicon({"famine", "hunger", "starvation", "food insecurity", "food crisis",
                          "malnutrition", "undernourishment", "food shortage", "food security",
                          "food emergency", "malnourished", "starving", "humanitarian crisis"});
}

bool TargetLexicon::matches(std::span<const std::string> tokens) const {
    const auto stemmed = stem_all(tokens);
    return matches_stemmed(stemmed);
}

bool TargetLexicon::matches_stemmed(std::span<const std::string> stemmed) const {
    return any_root_in(roots_, stemmed);
}

CausalLinkSet::CausalLinkSet(std::vector<std::string> links)
    : links_(std::move(links)), roots_(stem_phrases(links_, "causal link")) {}

CausalLinkSet CausalLinkSet::defaults() {
    return CausalLinkSet({
        "cause",       "because",     "because of", "due to",     "owing to",  "thanks to",
        "result in",   "result from", "lead to",    "bring about", "give rise", "as a result",
        "consequence", "consequently", "therefore", "thus",        "hence",     "trigger",
        "provoke",     "induce",      "produce",    "create",      "generate",  "spark",
        "prompt",      "drive",       "force",      "render",      "precipitate", "contribute",
        "responsible", "reason",      "effect",     "stem from",   "arise from", "fuel",
        "aggravate",   "exacerbate",  "worsen",     "affect",      "ravage",
    });
}

bool CausalLinkSet::matches_stemmed(std::span<const std::string> stemmed) const {
    return any_root_in(roots_, stemmed);
}

const StopList& default_stop_list() {
    static const StopList kStop = {
        "a",     "an",    "the",   "and",  "or",   "but",  "of",   "to",    "in",    "on",
        "at",    "by",    "for",   "with", "from", "as",   "into", "about", "than",  "then",
        "is",    "are",   "was",   "were", "be",   "been", "being", "am",   "has",   "have",
        "had",   "do",    "does",  "did",  "it",   "its",  "this", "that",  "these", "those",
        "he",    "she",   "they",  "them", "his",  "her",  "their", "we",   "our",   "you",
        "i",     "me",    "my",    "may",  "might", "will", "would", "can", "could", "should",
        "shall", "must",  "not",   "no",   "so",   "if",   "which", "who",  "whom",  "whose",
        "what",  "where", "when",  "while", "there", "here", "also", "some", "such",  "very",
    };
    return kStop;
}

}  // namespace fewscast::frames
