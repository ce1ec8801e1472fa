#include "fewscast/corpus/gazetteer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"

namespace fewscast::corpus {

std::string_view to_string(Level level) {
    switch (level) {
        case Level::District: return "district";
        case Level::Province: return "province";
        case Level::Country: return "country";
    }
    return "country";
}

Level parse_level(std::string_view text) {
    if (text == "district") return Level::District;
    if (text == "province") return Level::Province;
    if (text == "country") return Level::Country;
    throw DataError("unknown location level '" + std::string(text) + "'");
}

Gazetteer::Gazetteer(std::vector<District> districts) : districts_(std::move(districts)) {
    for (std::size_t i = 0; i < districts_.size(); ++i) {
        const auto& d = districts_[i];
        const std::string where = "district '" + d.id + "'";
        if (d.id.empty()) throw DataError("gazetteer record " + std::to_string(i) + " has no id");
        if (!by_id_.emplace(d.id, i).second) throw DataError("duplicate " + where);
        if (d.province_id.empty() || d.country.empty()) {
            throw DataError(where + " lacks a province or country");
        }
        if (!(d.lat >= -90.0 && d.lat <= 90.0) || !(d.lon >= -180.0 && d.lon <= 180.0)) {
            throw DataError(where + " has invalid centroid");
        }
        for (double v : d.statics) {
            if (!std::isfinite(v)) throw DataError(where + " has a non-finite static factor");
        }
        auto [it, inserted] = province_country_.emplace(d.province_id, d.country);
        if (!inserted && it->second != d.country) {
            throw DataError("province '" + d.province_id + "' spans several countries");
        }

        std::vector<std::string> names{d.name};
        names.insert(names.end(), d.aliases.begin(), d.aliases.end());
        for (const auto& name : names) {
            auto tokens = text::tokenize(name);
            if (tokens.empty()) continue;
            const std::string first = tokens.front();
            by_first_token_[first].push_back({std::move(tokens), i});
        }
    }
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto col = [&](std::string_view name) { return table.column(name); };
    const std::size_t c_id = col("district_id"), c_name = col("name"), c_alias = col("aliases"),
                      c_prov = col("province_id"), c_country = col("country"), c_lat = col("lat"),
                      c_lon = col("lon");
    std::array<std::size_t, kStaticFactorCount> c_static{};
    for (std::size_t k = 0; k < kStaticFactorCount; ++k) c_static[k] = col(kStaticFactorNames[k]);

    std::vector<District> districts;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
        const auto number = [&](std::size_t c) {
            try {
                std::size_t used = 0;
                double v = std::stod(row[c], &used);
                if (used != row[c].size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw DataError(where + ": bad number '" + row[c] + "' in column " +
                                table.header[c]);
            }
        };
        District d;
        d.id = row[c_id];
        d.name = row[c_name];
        std::size_t pos = 0;
        const std::string& aliases = row[c_alias];
        while (pos <= aliases.size() && !aliases.empty()) {
            auto bar = aliases.find('|', pos);
            if (bar == std::string::npos) bar = aliases.size();
            if (bar > pos) d.aliases.push_back(aliases.substr(pos, bar - pos));
            pos = bar + 1;
        }
        d.province_id = row[c_prov];
        d.country = row[c_country];
        d.lat = number(c_lat);
        d.lon = number(c_lon);
        for (std::size_t k = 0; k < kStaticFactorCount; ++k) d.statics[k] = number(c_static[k]);
        districts.push_back(std::move(d));
    }
    try {
        return Gazetteer(std::move(districts));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::optional<std::size_t> Gazetteer::index_of(std::string_view district_id) const {
    auto it = by_id_.find(district_id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

const District& Gazetteer::at(std::string_view district_id) const {
    auto idx = index_of(district_id);
    if (!idx) throw DataError("unknown district '" + std::string(district_id) + "'");
    return districts_[*idx];
}

std::vector<std::string> Gazetteer::provinces() const {
    std::vector<std::string> out;
    for (const auto& [p, c] : province_country_) out.push_back(p);
    return out;
}

std::vector<std::string> Gazetteer::countries() const {
    std::set<std::string> s;
    for (const auto& d : districts_) s.insert(d.country);
    return {s.begin(), s.end()};
}

std::vector<std::string> Gazetteer::districts_in_province(std::string_view province) const {
    std::vector<std::string> out;
    for (const auto& d : districts_) {
        if (d.province_id == province) out.push_back(d.id);
    }
    return out;
}

bool Gazetteer::contains(const LocationKey& key) const {
    switch (key.level) {
        case Level::District: return by_id_.count(key.id) > 0;
        case Level::Province: return province_country_.count(key.id) > 0;
        case Level::Country:
            return std::any_of(districts_.begin(), districts_.end(),
                               [&](const District& d) { return d.country == key.id; });
    }
    return false;
}

std::string Gazetteer::country_of(const LocationKey& key) const {
    switch (key.level) {
        case Level::District: return at(key.id).country;
        case Level::Province: {
            auto it = province_country_.find(key.id);
            if (it == province_country_.end()) {
                throw DataError("unknown province '" + key.id + "'");
            }
            return it->second;
        }
        case Level::Country: return key.id;
    }
    return key.id;
}

std::vector<std::size_t> Gazetteer::find_mentions(std::span<const std::string> tokens) const {
    std::set<std::size_t> found;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = by_first_token_.find(tokens[i]);
        if (it == by_first_token_.end()) continue;
        for (const auto& pattern : it->second) {
            if (i + pattern.tokens.size() > tokens.size()) continue;
            if (std::equal(pattern.tokens.begin(), pattern.tokens.end(), tokens.begin() + i)) {
                found.insert(pattern.district);
            }
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace fewscast::corpus
