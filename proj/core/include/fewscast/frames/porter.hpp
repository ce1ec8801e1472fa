#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fewscast::frames {

/// Porter (1980) suffix-stripping stemmer over lowercase ASCII words.
///
/// Follows the published rule tables (e.g. "abli" -> "able" in step 2, no
/// "logi" rule). Words of one or two letters are returned unchanged.
std::string porter_stem(std::string_view word);

std::vector<std::string> stem_all(std::span<const std::string> words);

}  // namespace fewscast::frames
