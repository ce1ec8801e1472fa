#include "fewscast/common/text.hpp"

#include <algorithm>

namespace fewscast::text {

namespace {

char lower_alnum(char c) {
    if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) return c;
    return '\0';
}

}  // namespace

std::string normalize_token(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (char l = lower_alnum(c)) out.push_back(l);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : raw) {
        if (char l = lower_alnum(c)) {
            current.push_back(l);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string join(std::span<const std::string> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::vector<std::string> split(std::string_view ngram) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < ngram.size()) {
        const auto next = ngram.find(' ', pos);
        const auto end = next == std::string_view::npos ? ngram.size() : next;
        if (end > pos) tokens.emplace_back(ngram.substr(pos, end - pos));
        pos = end + 1;
    }
    return tokens;
}

std::size_t find_subsequence(std::span<const std::string> haystack,
                             std::span<const std::string> needle) {
    if (needle.empty() || needle.size() > haystack.size()) return std::string::npos;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
    return it == haystack.end() ? std::string::npos
                                : static_cast<std::size_t>(it - haystack.begin());
}

std::size_t count_subsequence(std::span<const std::string> haystack,
                              std::span<const std::string> needle) {
    if (needle.empty() || needle.size() > haystack.size()) return 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) ++count;
    }
    return count;
}

}  // namespace fewscast::text
