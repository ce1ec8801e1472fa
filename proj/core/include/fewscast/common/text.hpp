#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fewscast::text {

/// Lowercases ASCII letters and drops every character that is not [a-z0-9].
/// Returns an empty string when nothing survives.
std::string normalize_token(std::string_view raw);

/// Splits on anything that is not an ASCII letter or digit, lowercasing as it goes.
/// "Floods, pests & Jamaame!" -> {"floods", "pests", "jamaame"}
std::vector<std::string> tokenize(std::string_view raw);

/// N-grams travel through the pipeline as their tokens joined by single spaces.
std::string join(std::span<const std::string> tokens);
std::vector<std::string> split(std::string_view ngram);

/// Position of the first contiguous occurrence of `needle` in `haystack`, or npos.
std::size_t find_subsequence(std::span<const std::string> haystack,
                             std::span<const std::string> needle);

inline bool contains_subsequence(std::span<const std::string> haystack,
                                 std::span<const std::string> needle) {
    return find_subsequence(haystack, needle) != std::string::npos;
}

/// Number of (possibly overlapping) contiguous occurrences.
std::size_t count_subsequence(std::span<const std::string> haystack,
                              std::span<const std::string> needle);

}  // namespace fewscast::text
