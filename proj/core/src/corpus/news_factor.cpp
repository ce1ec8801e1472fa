#include "fewscast/corpus/news_factor.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"

namespace fewscast::corpus {

ArticleMask mark_articles(const CorpusIndex& index,
                          const std::function<bool(const Article&)>& predicate) {
    ArticleMask mask(index.size(), false);
    for (ArticleId id = 0; id < index.size(); ++id) mask[id] = predicate(index.article(id));
    return mask;
}

namespace {

struct MonthRange {
    Month first;
    int count = 0;

    [[nodiscard]] bool contains(Month m) const { return m >= first && m - first < count; }
    [[nodiscard]] std::size_t offset(Month m) const { return static_cast<std::size_t>(m - first); }
};

MonthRange resolve_range(const CorpusIndex& index, const FactorOptions& options) {
    const Month first = options.first.value_or(index.first_month());
    const Month last = options.last.value_or(index.last_month());
    if (last < first) throw ConfigError("news factor month range is empty");
    return {first, last - first + 1};
}

bool is_excluded(const FactorOptions& options, ArticleId id) {
    return options.excluded != nullptr && id < options.excluded->size() && (*options.excluded)[id];
}

// An article counts towards location L's denominator when it is tagged with L's
// country (or, in corpus mode, always). Numerators only count eligible articles,
// which keeps every factor inside [0,1].
bool eligible(const Article& a, const std::string& country, Denominator mode) {
    if (mode == Denominator::Corpus) return true;
    return std::binary_search(a.countries.begin(), a.countries.end(), country);
}

}  // namespace

std::vector<NewsFactorSeries> compute_news_factors(const std::vector<std::string>& features,
                                                   const std::vector<LocationKey>& locations,
                                                   const CorpusIndex& index,
                                                   const FactorOptions& options) {
    const MonthRange range = resolve_range(index, options);
    const auto& gaz = index.gazetteer();

    std::vector<std::string> location_country;
    std::map<LocationKey, std::size_t> location_slot;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (!gaz.contains(locations[i])) {
            throw DataError("unknown location '" + locations[i].id + "' (" +
                            std::string(to_string(locations[i].level)) + ")");
        }
        location_country.push_back(gaz.country_of(locations[i]));
        location_slot.emplace(locations[i], i);
    }

    // Denominators: per country (or corpus-wide) per month.
    std::map<std::string, std::vector<std::size_t>> country_totals;
    std::vector<std::size_t> corpus_totals(static_cast<std::size_t>(range.count), 0);
    for (ArticleId id = 0; id < index.size(); ++id) {
        const auto& a = index.article(id);
        const Month m(a.date);
        if (!range.contains(m) || is_excluded(options, id)) continue;
        ++corpus_totals[range.offset(m)];
        for (const auto& c : a.countries) {
            auto& v = country_totals[c];
            if (v.empty()) v.assign(static_cast<std::size_t>(range.count), 0);
            ++v[range.offset(m)];
        }
    }
    const std::vector<std::size_t> no_articles(static_cast<std::size_t>(range.count), 0);
    const auto denominators = [&](std::size_t slot) -> const std::vector<std::size_t>& {
        if (options.denominator == Denominator::Corpus) return corpus_totals;
        auto it = country_totals.find(location_country[slot]);
        return it == country_totals.end() ? no_articles : it->second;
    };

    std::vector<NewsFactorSeries> out;
    out.reserve(features.size() * locations.size());
    for (const auto& feature : features) {
        const auto tokens = text::split(feature);
        std::vector<std::vector<std::size_t>> numer(
            locations.size(), std::vector<std::size_t>(static_cast<std::size_t>(range.count), 0));
        const bool known = !tokens.empty() && std::all_of(tokens.begin(), tokens.end(), [&](auto& t) {
            return index.in_vocabulary(t);
        });
        if (known) {
            for (ArticleId id : index.ngram_postings(tokens)) {
                const auto& a = index.article(id);
                const Month m(a.date);
                if (!range.contains(m) || is_excluded(options, id)) continue;
                for (const auto& loc : index.locations_of(id)) {
                    auto it = location_slot.find(loc);
                    if (it == location_slot.end()) continue;
                    if (!eligible(a, location_country[it->second], options.denominator)) continue;
                    ++numer[it->second][range.offset(m)];
                }
            }
        }
        for (std::size_t s = 0; s < locations.size(); ++s) {
            NewsFactorSeries series;
            series.feature = feature;
            series.location = locations[s];
            series.first = range.first;
            series.values.assign(static_cast<std::size_t>(range.count), 0.0);
            series.zero_denominator.assign(static_cast<std::size_t>(range.count), false);
            const auto& denom = denominators(s);
            for (std::size_t t = 0; t < series.values.size(); ++t) {
                if (denom[t] == 0) {
                    series.zero_denominator[t] = true;
                } else {
                    series.values[t] =
                        static_cast<double>(numer[s][t]) / static_cast<double>(denom[t]);
                }
            }
            out.push_back(std::move(series));
        }
    }
    return out;
}

NewsFactorSeries compute_news_factor(const std::string& feature, const LocationKey& location,
                                     const CorpusIndex& index, const FactorOptions& options) {
    const auto tokens = text::split(feature);
    if (tokens.empty()) throw DataError("empty feature");
    for (const auto& t : tokens) {
        if (!index.in_vocabulary(t)) {
            throw DataError("feature '" + feature + "': token '" + t + "' not in corpus");
        }
    }
    auto batch = compute_news_factors({feature}, {location}, index, options);
    return std::move(batch.front());
}

void write_factors_csv(const std::filesystem::path& path,
                       const std::vector<NewsFactorSeries>& factors) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"feature", "location_id", "level", "month", "value"});
    for (const auto& f : factors) {
        for (std::size_t t = 0; t < f.values.size(); ++t) {
            w.field(f.feature)
                .field(f.location.id)
                .field(to_string(f.location.level))
                .field((f.first + static_cast<int>(t)).str())
                .field(f.values[t]);
            w.end_row();
        }
    }
}

std::vector<NewsFactorSeries> read_factors_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const std::size_t c_f = table.column("feature"), c_id = table.column("location_id"),
                      c_level = table.column("level"), c_month = table.column("month"),
                      c_value = table.column("value");
    std::vector<NewsFactorSeries> out;
    std::map<std::pair<std::string, LocationKey>, std::size_t> slot;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
        LocationKey key{parse_level(row[c_level]), row[c_id]};
        const Month m = Month::parse(row[c_month]);
        double v = 0.0;
        try {
            v = std::stod(row[c_value]);
        } catch (const std::exception&) {
            throw DataError(where + ": bad value '" + row[c_value] + "'");
        }
        auto [it, inserted] = slot.emplace(std::make_pair(row[c_f], key), out.size());
        if (inserted) {
            NewsFactorSeries s;
            s.feature = row[c_f];
            s.location = key;
            s.first = m;
            out.push_back(std::move(s));
        }
        auto& s = out[it->second];
        if (m != s.last() + 1 && !s.values.empty()) {
            throw DataError(where + ": months of '" + s.feature + "' are not contiguous");
        }
        s.values.push_back(v);
        s.zero_denominator.push_back(false);
    }
    return out;
}

}  // namespace fewscast::corpus
