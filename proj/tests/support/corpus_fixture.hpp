#pragma once

#include <string>
#include <vector>

#include "fewscast/common/text.hpp"
#include "fewscast/corpus/article.hpp"
#include "fewscast/corpus/gazetteer.hpp"

namespace testutil {

inline fewscast::corpus::Article article(std::string id, fewscast::Date date,
                                         std::vector<std::string> countries,
                                         const std::string& text) {
    fewscast::corpus::Article a;
    a.id = std::move(id);
    a.date = date;
    a.source = "wire";
    a.countries = std::move(countries);
    a.tokens = fewscast::text::tokenize(text);
    return a;
}

/// Two Somali districts in one province, one Ethiopian district known by an alias.
inline fewscast::corpus::Gazetteer small_gazetteer() {
    using fewscast::corpus::District;
    District jam{"SO01", "Jamaame", {}, "SO-JH", "SO", 0.0, 42.7, {1e5, 3000, 1.0, 0.2, 0.3}};
    District kis{"SO02", "Kismaayo", {"kismayo"}, "SO-JH", "SO", -0.4, 42.5, {2e5, 4000, 0.5, 0.1, 0.2}};
    District maj{"ET01", "Godere", {"Majang"}, "ET-GA", "ET", 7.2, 35.0, {5e4, 2000, 2.0, 0.3, 0.4}};
    return fewscast::corpus::Gazetteer({jam, kis, maj});
}

}  // namespace testutil
