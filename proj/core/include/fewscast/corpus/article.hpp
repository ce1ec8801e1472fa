#pragma once

#include <string>
#include <vector>

#include "fewscast/common/month.hpp"

namespace fewscast::corpus {

struct Article {
    std::string id;
    Date date;
    std::string source;
    std::vector<std::string> countries;  ///< sorted, unique, non-empty
    std::vector<std::string> tokens;     ///< lowercased, punctuation stripped
};

}  // namespace fewscast::corpus
