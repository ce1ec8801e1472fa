#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fewscast::corpus {

enum class Level { District, Province, Country };

std::string_view to_string(Level level);
Level parse_level(std::string_view text);

/// A place a news factor can be computed for. District, province and country
/// identifiers live in separate namespaces, so the level is part of the key.
struct LocationKey {
    Level level = Level::Country;
    std::string id;

    auto operator<=>(const LocationKey&) const = default;
};

inline constexpr std::size_t kStaticFactorCount = 5;
inline constexpr std::array<std::string_view, kStaticFactorCount> kStaticFactorNames = {
    "population", "area_km2", "ruggedness", "cropland_share", "pasture_share"};

struct District {
    std::string id;
    std::string name;
    std::vector<std::string> aliases;
    std::string province_id;
    std::string country;  ///< ISO 3166 alpha-2
    double lat = 0.0;
    double lon = 0.0;
    std::array<double, kStaticFactorCount> statics{};
};

/// District records plus a token-level name matcher.
class Gazetteer {
public:
    Gazetteer() = default;
    /// Validates ids, coordinates and static factors; throws DataError on violation.
    explicit Gazetteer(std::vector<District> districts);

    /// CSV header: district_id,name,aliases,province_id,country,lat,lon,population,
    /// area_km2,ruggedness,cropland_share,pasture_share. Aliases are '|'-separated.
    static Gazetteer load(const std::filesystem::path& path);

    [[nodiscard]] const std::vector<District>& districts() const { return districts_; }
    [[nodiscard]] std::size_t size() const { return districts_.size(); }
    [[nodiscard]] bool empty() const { return districts_.empty(); }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view district_id) const;
    [[nodiscard]] const District& at(std::string_view district_id) const;

    /// Sorted unique province / country ids.
    [[nodiscard]] std::vector<std::string> provinces() const;
    [[nodiscard]] std::vector<std::string> countries() const;
    [[nodiscard]] std::vector<std::string> districts_in_province(std::string_view province) const;

    [[nodiscard]] bool contains(const LocationKey& key) const;
    /// Country a location belongs to. Throws DataError for unknown districts/provinces;
    /// any country code is accepted as-is.
    [[nodiscard]] std::string country_of(const LocationKey& key) const;

    /// District indices whose name or an alias occurs as a whole-token subsequence.
    [[nodiscard]] std::vector<std::size_t> find_mentions(std::span<const std::string> tokens) const;

private:
    struct NamePattern {
        std::vector<std::string> tokens;
        std::size_t district = 0;
    };

    std::vector<District> districts_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::map<std::string, std::string, std::less<>> province_country_;
    std::unordered_map<std::string, std::vector<NamePattern>> by_first_token_;
};

}  // namespace fewscast::corpus
