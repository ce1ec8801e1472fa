#include "fewscast/frames/porter.hpp"

#include <array>
#include <optional>

namespace fewscast::frames {

namespace {

class Stemmer {
public:
    explicit Stemmer(std::string_view word) : w_(word) {}

    std::string run() {
        if (w_.size() <= 2) return w_;
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return w_;
    }

private:
    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // y is a consonant at the start of a word or after a vowel.
    [[nodiscard]] bool consonant(const std::string& s, std::size_t i) const {
        switch (s[i]) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u': return false;
            case 'y': return i == 0 || !consonant(s, i - 1);
            default: return true;
        }
    }

    // m in [C](VC)^m[V].
    [[nodiscard]] int measure(const std::string& s) const {
        int m = 0;
        bool prev_vowel = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const bool c = consonant(s, i);
            if (c && prev_vowel) ++m;
            prev_vowel = !c;
        }
        return m;
    }

    [[nodiscard]] bool has_vowel(const std::string& s) const {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!consonant(s, i)) return true;
        }
        return false;
    }

    [[nodiscard]] bool double_consonant(const std::string& s) const {
        const auto n = s.size();
        return n >= 2 && s[n - 1] == s[n - 2] && consonant(s, n - 1);
    }

    // *o: ends consonant-vowel-consonant, last not w, x or y.
    [[nodiscard]] bool cvc(const std::string& s) const {
        const auto n = s.size();
        if (n < 3) return false;
        if (!consonant(s, n - 3) || consonant(s, n - 2) || !consonant(s, n - 1)) return false;
        const char last = s[n - 1];
        return last != 'w' && last != 'x' && last != 'y';
    }

    [[nodiscard]] bool ends(std::string_view suffix) const { return w_.ends_with(suffix); }
    [[nodiscard]] std::string stem_without(std::string_view suffix) const {
        return w_.substr(0, w_.size() - suffix.size());
    }

    // The first rule whose suffix matches decides; its condition is m(stem) > min_m.
    template <std::size_t N>
    void apply_first(const std::array<Rule, N>& rules, int min_m) {
        for (const auto& r : rules) {
            if (!ends(r.suffix)) continue;
            auto stem = stem_without(r.suffix);
            if (measure(stem) > min_m) w_ = stem + std::string(r.replacement);
            return;
        }
    }

    void step1a() {
        if (ends("sses")) {
            w_ = stem_without("sses") + "ss";
        } else if (ends("ies")) {
            w_ = stem_without("ies") + "i";
        } else if (ends("ss")) {
            // unchanged
        } else if (ends("s")) {
            w_ = stem_without("s");
        }
    }

    void step1b() {
        if (ends("eed")) {
            auto stem = stem_without("eed");
            if (measure(stem) > 0) w_ = stem + "ee";
            return;
        }
        std::optional<std::string> stem;
        if (ends("ed")) {
            auto s = stem_without("ed");
            if (has_vowel(s)) stem = s;
        } else if (ends("ing")) {
            auto s = stem_without("ing");
            if (has_vowel(s)) stem = s;
        }
        if (!stem) return;
        w_ = *stem;
        if (ends("at") || ends("bl") || ends("iz")) {
            w_ += 'e';
        } else if (double_consonant(w_) && !ends("l") && !ends("s") && !ends("z")) {
            w_.pop_back();
        } else if (measure(w_) == 1 && cvc(w_)) {
            w_ += 'e';
        }
    }

    void step1c() {
        if (ends("y")) {
            auto stem = stem_without("y");
            if (has_vowel(stem)) w_ = stem + "i";
        }
    }

    void step2() {
        static constexpr std::array<Rule, 20> kRules = {{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
        }};
        apply_first(kRules, 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> kRules = {{
            {"icate", "ic"},
            {"ative", ""},
            {"alize", "al"},
            {"iciti", "ic"},
            {"ical", "ic"},
            {"ful", ""},
            {"ness", ""},
        }};
        apply_first(kRules, 0);
    }

    void step4() {
        static constexpr std::array<std::string_view, 19> kSuffixes = {
            "al",   "ance", "ence", "er", "ic",  "able", "ible", "ant", "ement", "ment",
            "ent",  "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
        for (auto suffix : kSuffixes) {
            if (!ends(suffix)) continue;
            auto stem = stem_without(suffix);
            bool ok = measure(stem) > 1;
            if (suffix == "ion") ok = ok && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
            if (ok) w_ = stem;
            return;
        }
    }

    void step5a() {
        if (!ends("e")) return;
        auto stem = stem_without("e");
        const int m = measure(stem);
        if (m > 1 || (m == 1 && !cvc(stem))) w_ = stem;
    }

    void step5b() {
        if (measure(w_) > 1 && double_consonant(w_) && ends("l")) w_.pop_back();
    }

    std::string w_;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

std::vector<std::string> stem_all(std::span<const std::string> words) {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(porter_stem(w));
    return out;
}

}  // namespace fewscast::frames
