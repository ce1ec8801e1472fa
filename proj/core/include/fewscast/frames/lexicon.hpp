#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

namespace fewscast::frames {

/// Food-insecurity keywords whose stems must appear in an "effect" constituent.
class TargetLexicon {
public:
    /// Throws ConfigError when empty or when a keyword has no tokens.
    explicit TargetLexicon(std::vector<std::string> keywords);

    /// famine, hunger, starvation, food insecurity, food crisis, malnutrition,
    /// undernourishment, food shortage, food security, food emergency,
    /// malnourished, starving, humanitarian crisis.
    static TargetLexicon defaults();

    [[nodiscard]] const std::vector<std::string>& keywords() const { return keywords_; }
    /// Stemmed token sequence of each keyword.
    [[nodiscard]] const std::vector<std::vector<std::string>>& roots() const { return roots_; }

    /// True when some keyword root occurs in the stemmed form of `tokens`.
    [[nodiscard]] bool matches(std::span<const std::string> tokens) const;
    [[nodiscard]] bool matches_stemmed(std::span<const std::string> stemmed) const;

private:
    std::vector<std::string> keywords_;
    std::vector<std::vector<std::string>> roots_;
};

/// Lexical triggers of causal frames (41 by default). Matching is on stems.
class CausalLinkSet {
public:
    explicit CausalLinkSet(std::vector<std::string> links);
    static CausalLinkSet defaults();

    [[nodiscard]] const std::vector<std::string>& links() const { return links_; }
    [[nodiscard]] bool matches_stemmed(std::span<const std::string> stemmed) const;

private:
    std::vector<std::string> links_;
    std::vector<std::vector<std::string>> roots_;
};

using StopList = std::set<std::string, std::less<>>;

/// Function words. Only n-grams made entirely of these are discarded.
const StopList& default_stop_list();

}  // namespace fewscast::frames
