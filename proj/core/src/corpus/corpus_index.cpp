#include "fewscast/corpus/corpus_index.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "json.hpp"

namespace fewscast::corpus {

std::set<LocationKey> match_locations(const Article& article, const Gazetteer& gazetteer) {
    std::set<LocationKey> out;
    for (const auto& c : article.countries) out.insert({Level::Country, c});
    for (std::size_t idx : gazetteer.find_mentions(article.tokens)) {
        const auto& d = gazetteer.districts()[idx];
        out.insert({Level::District, d.id});
        out.insert({Level::Province, d.province_id});
        out.insert({Level::Country, d.country});
    }
    return out;
}

CorpusIndex::CorpusIndex(std::vector<Article> articles, Gazetteer gazetteer, DateWindow window)
    : articles_(std::move(articles)), gazetteer_(std::move(gazetteer)), window_(window) {
    if (window_.empty()) throw ConfigError("corpus window is empty");
    std::sort(articles_.begin(), articles_.end(), [](const Article& a, const Article& b) {
        return std::tie(a.date, a.id) < std::tie(b.date, b.id);
    });
    std::set<std::string_view> ids;
    for (const auto& a : articles_) {
        if (!ids.insert(a.id).second) throw DataError("duplicate article id '" + a.id + "'");
        if (a.countries.empty()) throw DataError("article '" + a.id + "' has no country tags");
        if (!window_.contains(a.date)) {
            throw DataError("article '" + a.id + "' dated " + a.date.str() + " is outside window");
        }
    }

    article_locations_.resize(articles_.size());
    for (ArticleId id = 0; id < articles_.size(); ++id) {
        const auto& a = articles_[id];
        const Month m(a.date);
        by_month_[m].push_back(id);
        for (const auto& c : a.countries) ++country_month_totals_[{c, m}];

        article_locations_[id] = match_locations(a, gazetteer_);
        for (const auto& loc : article_locations_[id]) location_postings_[loc].push_back(id);

        std::vector<std::string_view> seen(a.tokens.begin(), a.tokens.end());
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto tok : seen) token_postings_[std::string(tok)].push_back(id);
    }
}

std::span<const ArticleId> CorpusIndex::month_bucket(Month month) const {
    auto it = by_month_.find(month);
    if (it == by_month_.end()) return {};
    return it->second;
}

std::size_t CorpusIndex::monthly_total(std::string_view country, Month month) const {
    auto it = country_month_totals_.find({std::string(country), month});
    return it == country_month_totals_.end() ? 0 : it->second;
}

std::size_t CorpusIndex::monthly_total(Month month) const { return month_bucket(month).size(); }

std::span<const ArticleId> CorpusIndex::location_postings(const LocationKey& key) const {
    auto it = location_postings_.find(key);
    if (it == location_postings_.end()) return {};
    return it->second;
}

bool CorpusIndex::in_vocabulary(std::string_view token) const {
    return token_postings_.count(std::string(token)) > 0;
}

std::span<const ArticleId> CorpusIndex::token_postings(std::string_view token) const {
    auto it = token_postings_.find(std::string(token));
    if (it == token_postings_.end()) return {};
    return it->second;
}

std::vector<ArticleId> CorpusIndex::ngram_postings(std::span<const std::string> ngram) const {
    if (ngram.empty()) return {};
    // Start from the rarest token.
    std::size_t rarest = 0;
    for (std::size_t i = 1; i < ngram.size(); ++i) {
        if (token_postings(ngram[i]).size() < token_postings(ngram[rarest]).size()) rarest = i;
    }
    std::vector<ArticleId> out;
    for (ArticleId id : token_postings(ngram[rarest])) {
        if (ngram.size() == 1 || text::contains_subsequence(articles_[id].tokens, ngram)) {
            out.push_back(id);
        }
    }
    return out;
}

std::map<std::string, std::size_t> CorpusIndex::ngram_counts(std::size_t n) const {
    std::map<std::string, std::size_t> counts;
    if (n == 0) return counts;
    for (const auto& a : articles_) {
        for (std::size_t i = 0; i + n <= a.tokens.size(); ++i) {
            ++counts[text::join(std::span<const std::string>(a.tokens).subspan(i, n))];
        }
    }
    return counts;
}

std::vector<std::string> CorpusIndex::vocabulary() const {
    std::vector<std::string> out;
    out.reserve(token_postings_.size());
    for (const auto& [tok, _] : token_postings_) out.push_back(tok);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

Article parse_article(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    if (!j.is_object()) throw DataError("not a JSON object");
    for (const char* key : {"id", "date", "source", "countries", "text"}) {
        if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    }
    Article a;
    a.id = j.at("id").get<std::string>();
    if (a.id.empty()) throw DataError("empty id");
    a.date = Date::parse(j.at("date").get<std::string>());
    a.source = j.at("source").get<std::string>();
    for (const auto& c : j.at("countries")) a.countries.push_back(c.get<std::string>());
    std::sort(a.countries.begin(), a.countries.end());
    a.countries.erase(std::unique(a.countries.begin(), a.countries.end()), a.countries.end());
    if (a.countries.empty()) throw DataError("empty countries");
    a.tokens = text::tokenize(j.at("text").get<std::string>());
    return a;
}

}  // namespace

CorpusIndex ingest_corpus(const std::filesystem::path& path, const DateWindow& window,
                          const Gazetteer& gazetteer, const IngestOptions& options,
                          IngestReport* report) {
    if (window.empty()) throw ConfigError("corpus window is empty");
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus " + path.string());

    IngestReport local;
    std::vector<Article> articles;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    const auto problem = [&](const std::string& reason) {
        const auto msg = path.string() + ":" + std::to_string(line_no) + ": " + reason;
        if (options.strict) throw DataError(msg);
        local.problems.push_back(msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        ++local.lines;
        Article a;
        try {
            a = parse_article(line);
        } catch (const nlohmann::json::exception& e) {
            problem(std::string("malformed JSON: ") + e.what());
            continue;
        } catch (const DataError& e) {
            problem(e.what());
            continue;
        }
        if (!window.contains(a.date)) {
            ++local.outside_window;
            continue;
        }
        if (!ids.insert(a.id).second) {
            problem("duplicate article id '" + a.id + "'");
            continue;
        }
        articles.push_back(std::move(a));
    }
    local.accepted = articles.size();
    if (articles.empty()) {
        throw DataError("no articles of " + path.string() + " fall inside " + window.first.str() +
                        " .. " + window.last.str());
    }
    if (report) *report = std::move(local);
    return CorpusIndex(std::move(articles), gazetteer, window);
}

}  // namespace fewscast::corpus
