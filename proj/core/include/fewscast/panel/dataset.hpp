#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fewscast/common/month.hpp"
#include "fewscast/corpus/gazetteer.hpp"
#include "fewscast/corpus/news_factor.hpp"

namespace fewscast::panel {

struct IpcObservation {
    Month month;
    int phase = 1;
};

/// Monthly IPC phases over [first, last]: each month carries the latest
/// published phase at or before it, NaN before the first publication.
/// Phases outside 1..5 or conflicting duplicates are a DataError.
std::vector<double> forward_fill_ipc(std::span<const IpcObservation> observations, Month first,
                                     Month last);

/// One news feature's factor series at the three location levels. Province and
/// country series are indexed by the dataset's province / country lists.
struct NewsBlock {
    std::string feature;
    std::vector<std::vector<double>> district;
    std::vector<std::vector<double>> province;
    std::vector<std::vector<double>> country;
};

/// District x month panel. Every series spans `months` months from `first`;
/// NaN marks a missing value.
struct PanelDataset {
    std::vector<corpus::District> districts;
    std::vector<std::string> provinces;
    std::vector<std::string> countries;
    std::vector<std::size_t> province_of;  ///< district -> index into provinces
    std::vector<std::size_t> country_of;   ///< district -> index into countries

    Month first;
    std::size_t months = 0;

    std::vector<std::vector<double>> ipc;        ///< forward-filled, [district][month]
    std::vector<std::vector<double>> published;  ///< phase in publication months only

    std::vector<std::string> indicator_names;
    std::vector<std::vector<std::vector<double>>> indicators;  ///< [indicator][district][month]

    std::vector<NewsBlock> news;

    [[nodiscard]] Month last() const { return first + static_cast<int>(months) - 1; }
    [[nodiscard]] std::size_t month_index(Month m) const {
        return static_cast<std::size_t>(m - first);
    }
    [[nodiscard]] const NewsBlock& news_block(const std::string& feature) const;
    [[nodiscard]] std::size_t district_index(std::string_view id) const;
};

/// Panel CSV: district_id, month, ipc_phase, then one column per traditional
/// indicator. An empty ipc_phase means no publication that month; an empty
/// indicator cell is a missing value. Districts must appear in the gazetteer
/// and cover a gap-free month range.
struct PanelTable {
    std::vector<std::string> indicator_names;
    Month first;
    std::size_t months = 0;
    std::vector<std::string> district_ids;                     ///< gazetteer order
    std::vector<std::vector<double>> published;                ///< [district][month]
    std::vector<std::vector<std::vector<double>>> indicators;  ///< [indicator][district][month]
};

PanelTable read_panel_csv(const std::filesystem::path& path, const corpus::Gazetteer& gazetteer);

/// Assembles the modeling panel. `factors` must contain a district, province
/// and country series for every feature and every location in the gazetteer.
PanelDataset assemble_panel(const corpus::Gazetteer& gazetteer, const PanelTable& table,
                            const std::vector<std::string>& features,
                            const std::vector<corpus::NewsFactorSeries>& factors);

/// Differences a factor series `order` times; the first month moves forward by `order`.
corpus::NewsFactorSeries difference_factor(const corpus::NewsFactorSeries& series, int order);

/// Great-circle distance in kilometres.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// The 4 nearest other districts by centroid distance, nearest first (ties by index).
std::array<std::size_t, 4> nearest_neighbors(const std::vector<corpus::District>& districts,
                                             std::size_t d);

/// Unweighted mean of `quantity[j]` over the 4 nearest neighbors j of district d.
/// A month is NaN if any neighbor value is NaN.
std::vector<double> spatial_average(const PanelDataset& panel, std::size_t d,
                                    const std::vector<std::vector<double>>& quantity);

}  // namespace fewscast::panel
