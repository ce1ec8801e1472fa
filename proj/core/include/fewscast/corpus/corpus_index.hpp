#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fewscast/common/month.hpp"
#include "fewscast/corpus/article.hpp"
#include "fewscast/corpus/gazetteer.hpp"

namespace fewscast::corpus {

using ArticleId = std::uint32_t;

/// Location ids an article refers to: matched districts, the provinces and
/// countries those imply, and the article's country tags.
std::set<LocationKey> match_locations(const Article& article, const Gazetteer& gazetteer);

/// Read-only index over a windowed corpus.
///
/// Articles are stored sorted by (date, id), so ids are stable for a given
/// corpus regardless of the order lines appeared in the source file. Token
/// postings are kept per unigram; n-gram postings are derived by intersecting
/// unigram postings and verifying contiguity.
class CorpusIndex {
public:
    /// Throws DataError on duplicate ids, empty country tags, or articles outside `window`.
    CorpusIndex(std::vector<Article> articles, Gazetteer gazetteer, DateWindow window);

    [[nodiscard]] std::span<const Article> articles() const { return articles_; }
    [[nodiscard]] const Article& article(ArticleId id) const { return articles_[id]; }
    [[nodiscard]] std::size_t size() const { return articles_.size(); }
    [[nodiscard]] const Gazetteer& gazetteer() const { return gazetteer_; }
    [[nodiscard]] const DateWindow& window() const { return window_; }
    [[nodiscard]] Month first_month() const { return Month(window_.first); }
    [[nodiscard]] Month last_month() const { return Month(window_.last); }

    [[nodiscard]] std::span<const ArticleId> month_bucket(Month month) const;
    [[nodiscard]] std::size_t monthly_total(std::string_view country, Month month) const;
    [[nodiscard]] std::size_t monthly_total(Month month) const;

    [[nodiscard]] const std::set<LocationKey>& locations_of(ArticleId id) const {
        return article_locations_[id];
    }
    [[nodiscard]] std::span<const ArticleId> location_postings(const LocationKey& key) const;

    [[nodiscard]] bool in_vocabulary(std::string_view token) const;
    [[nodiscard]] std::span<const ArticleId> token_postings(std::string_view token) const;
    /// Sorted ids of articles containing the token sequence contiguously.
    [[nodiscard]] std::vector<ArticleId> ngram_postings(std::span<const std::string> ngram) const;

    /// Corpus-wide occurrence counts of every n-gram of length n, keyed by joined n-gram.
    [[nodiscard]] std::map<std::string, std::size_t> ngram_counts(std::size_t n) const;
    /// Sorted vocabulary.
    [[nodiscard]] std::vector<std::string> vocabulary() const;

private:
    std::vector<Article> articles_;
    Gazetteer gazetteer_;
    DateWindow window_;
    std::map<Month, std::vector<ArticleId>> by_month_;
    std::map<std::pair<std::string, Month>, std::size_t> country_month_totals_;
    std::vector<std::set<LocationKey>> article_locations_;
    std::map<LocationKey, std::vector<ArticleId>> location_postings_;
    std::unordered_map<std::string, std::vector<ArticleId>> token_postings_;
};

struct IngestOptions {
    bool strict = false;  ///< malformed lines and duplicate ids become fatal
};

struct IngestReport {
    std::size_t lines = 0;
    std::size_t accepted = 0;
    std::size_t outside_window = 0;
    std::vector<std::string> problems;  ///< "path:N: reason" for every skipped line
};

/// Loads a JSONL corpus ({id, date, source, countries, text} per line) and keeps
/// the articles dated inside `window`. Throws DataError when nothing survives.
CorpusIndex ingest_corpus(const std::filesystem::path& path, const DateWindow& window,
                          const Gazetteer& gazetteer, const IngestOptions& options = {},
                          IngestReport* report = nullptr);

}  // namespace fewscast::corpus
