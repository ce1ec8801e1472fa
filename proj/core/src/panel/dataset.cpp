#include "fewscast/panel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"

namespace fewscast::panel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t index_in(const std::vector<std::string>& sorted, const std::string& id) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    if (it == sorted.end() || *it != id) throw DataError("unknown location " + id);
    return static_cast<std::size_t>(it - sorted.begin());
}

double parse_cell(const std::string& text, const std::filesystem::path& path, std::size_t line) {
    if (text.empty()) return kNaN;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(line) + ": bad number '" + text +
                        "'");
    }
}

}  // namespace

std::vector<double> forward_fill_ipc(std::span<const IpcObservation> observations, Month first,
                                     Month last) {
    if (last < first) throw ConfigError("forward fill: empty month range");
    std::map<Month, int> by_month;
    for (const auto& o : observations) {
        if (o.phase < 1 || o.phase > 5) {
            throw DataError("IPC phase " + std::to_string(o.phase) + " outside 1..5 at " +
                            o.month.str());
        }
        const auto [it, inserted] = by_month.emplace(o.month, o.phase);
        if (!inserted && it->second != o.phase) {
            throw DataError("conflicting IPC phases for " + o.month.str());
        }
    }
    std::vector<double> out(static_cast<std::size_t>(last - first) + 1, kNaN);
    double current = kNaN;
    auto it = by_month.begin();
    while (it != by_month.end() && it->first < first) current = (it++)->second;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Month m = first + static_cast<int>(i);
        if (it != by_month.end() && it->first == m) current = (it++)->second;
        out[i] = current;
    }
    return out;
}

const NewsBlock& PanelDataset::news_block(const std::string& feature) const {
    for (const auto& b : news) {
        if (b.feature == feature) return b;
    }
    throw DataError("panel has no news factor for feature '" + feature + "'");
}

std::size_t PanelDataset::district_index(std::string_view id) const {
    for (std::size_t d = 0; d < districts.size(); ++d) {
        if (districts[d].id == id) return d;
    }
    throw DataError("unknown district " + std::string(id));
}

PanelTable read_panel_csv(const std::filesystem::path& path, const corpus::Gazetteer& gazetteer) {
    const auto table = csv::read(path);
    const auto c_district = table.column("district_id");
    const auto c_month = table.column("month");
    const auto c_phase = table.column("ipc_phase");
    std::vector<std::size_t> c_ind;
    PanelTable out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == c_district || c == c_month || c == c_phase) continue;
        c_ind.push_back(c);
        out.indicator_names.push_back(table.header[c]);
    }
    if (table.rows.empty()) throw DataError(path.string() + ": no panel rows");

    struct Cell {
        double phase;
        std::vector<double> values;
    };
    std::map<std::size_t, std::map<Month, Cell>> by_district;
    Month lo = Month::from_index(std::numeric_limits<std::int32_t>::max());
    Month hi = Month::from_index(std::numeric_limits<std::int32_t>::min());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.line_numbers[r];
        const auto d = gazetteer.index_of(row[c_district]);
        if (!d) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": district '" +
                            row[c_district] + "' not in gazetteer");
        }
        Month m;
        try {
            m = Month::parse(row[c_month]);
        } catch (const Error&) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": bad month '" +
                            row[c_month] + "'");
        }
        Cell cell{parse_cell(row[c_phase], path, line), {}};
        if (std::isfinite(cell.phase) &&
            (cell.phase < 1 || cell.phase > 5 || cell.phase != std::floor(cell.phase))) {
            throw DataError(path.string() + ":" + std::to_string(line) +
                            ": IPC phase must be an integer in 1..5");
        }
        for (auto c : c_ind) cell.values.push_back(parse_cell(row[c], path, line));
        if (!by_district[*d].emplace(m, std::move(cell)).second) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": duplicate row for " +
                            row[c_district] + " " + m.str());
        }
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    for (const auto& [d, rows] : by_district) {
        const int span = rows.rbegin()->first - rows.begin()->first + 1;
        if (span != static_cast<int>(rows.size())) {
            throw DataError(path.string() + ": month gaps for district " +
                            gazetteer.districts()[d].id);
        }
    }

    out.first = lo;
    out.months = static_cast<std::size_t>(hi - lo) + 1;
    out.indicators.assign(c_ind.size(), {});
    for (const auto& [d, rows] : by_district) {
        out.district_ids.push_back(gazetteer.districts()[d].id);
        std::vector<double> phases(out.months, kNaN);
        std::vector<std::vector<double>> ind(c_ind.size(), std::vector<double>(out.months, kNaN));
        for (const auto& [m, cell] : rows) {
            const auto t = static_cast<std::size_t>(m - lo);
            phases[t] = cell.phase;
            for (std::size_t k = 0; k < c_ind.size(); ++k) ind[k][t] = cell.values[k];
        }
        out.published.push_back(std::move(phases));
        for (std::size_t k = 0; k < c_ind.size(); ++k) out.indicators[k].push_back(std::move(ind[k]));
    }
    return out;
}

PanelDataset assemble_panel(const corpus::Gazetteer& gazetteer, const PanelTable& table,
                            const std::vector<std::string>& features,
                            const std::vector<corpus::NewsFactorSeries>& factors) {
    PanelDataset p;
    p.first = table.first;
    p.months = table.months;
    p.indicator_names = table.indicator_names;
    p.indicators = table.indicators;
    p.published = table.published;
    for (const auto& id : table.district_ids) p.districts.push_back(gazetteer.at(id));
    for (const auto& d : p.districts) {
        p.provinces.push_back(d.province_id);
        p.countries.push_back(d.country);
    }
    std::sort(p.provinces.begin(), p.provinces.end());
    p.provinces.erase(std::unique(p.provinces.begin(), p.provinces.end()), p.provinces.end());
    std::sort(p.countries.begin(), p.countries.end());
    p.countries.erase(std::unique(p.countries.begin(), p.countries.end()), p.countries.end());
    for (const auto& d : p.districts) {
        p.province_of.push_back(index_in(p.provinces, d.province_id));
        p.country_of.push_back(index_in(p.countries, d.country));
    }

    for (const auto& phases : p.published) {
        std::vector<IpcObservation> obs;
        for (std::size_t t = 0; t < phases.size(); ++t) {
            if (std::isfinite(phases[t])) {
                obs.push_back({p.first + static_cast<int>(t), static_cast<int>(phases[t])});
            }
        }
        p.ipc.push_back(forward_fill_ipc(obs, p.first, p.last()));
    }

    std::map<std::pair<std::string, corpus::LocationKey>, const corpus::NewsFactorSeries*> lookup;
    for (const auto& f : factors) lookup[{f.feature, f.location}] = &f;
    const auto place = [&](const std::string& feature, corpus::Level level,
                           const std::string& id) {
        const auto it = lookup.find({feature, corpus::LocationKey{level, id}});
        if (it == lookup.end()) {
            throw DataError("missing " + std::string(corpus::to_string(level)) +
                            " factor series for feature '" + feature + "' at " + id);
        }
        std::vector<double> out(p.months, kNaN);
        const auto& s = *it->second;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const int t = (s.first + static_cast<int>(i)) - p.first;
            if (t >= 0 && t < static_cast<int>(p.months)) out[static_cast<std::size_t>(t)] = s.values[i];
        }
        return out;
    };
    for (const auto& feature : features) {
        NewsBlock b;
        b.feature = feature;
        for (const auto& d : p.districts) b.district.push_back(place(feature, corpus::Level::District, d.id));
        for (const auto& id : p.provinces) b.province.push_back(place(feature, corpus::Level::Province, id));
        for (const auto& id : p.countries) b.country.push_back(place(feature, corpus::Level::Country, id));
        p.news.push_back(std::move(b));
    }
    return p;
}

corpus::NewsFactorSeries difference_factor(const corpus::NewsFactorSeries& series, int order) {
    if (order < 0) throw ConfigError("differencing order must be non-negative");
    corpus::NewsFactorSeries out = series;
    for (int k = 0; k < order; ++k) {
        if (out.values.empty()) break;
        std::vector<double> next;
        std::vector<bool> zero;
        for (std::size_t i = 1; i < out.values.size(); ++i) {
            next.push_back(out.values[i] - out.values[i - 1]);
            zero.push_back(out.zero_denominator[i]);
        }
        out.values = std::move(next);
        out.zero_denominator = std::move(zero);
        out.first = out.first + 1;
    }
    out.differencing_order = series.differencing_order + order;
    return out;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kRadius = 6371.0088;
    constexpr double kRad = 3.14159265358979323846 / 180.0;
    const double dlat = (lat2 - lat1) * kRad;
    const double dlon = (lon2 - lon1) * kRad;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) *
                         std::sin(dlon / 2);
    return 2.0 * kRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

std::array<std::size_t, 4> nearest_neighbors(const std::vector<corpus::District>& districts,
                                             std::size_t d) {
    if (districts.size() < 5) {
        throw DataError("spatial averages need at least 4 other districts, have " +
                        std::to_string(districts.size() == 0 ? 0 : districts.size() - 1));
    }
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < districts.size(); ++j) {
        if (j == d) continue;
        dist.emplace_back(haversine_km(districts[d].lat, districts[d].lon, districts[j].lat,
                                       districts[j].lon),
                          j);
    }
    std::partial_sort(dist.begin(), dist.begin() + 4, dist.end());
    return {dist[0].second, dist[1].second, dist[2].second, dist[3].second};
}

std::vector<double> spatial_average(const PanelDataset& panel, std::size_t d,
                                    const std::vector<std::vector<double>>& quantity) {
    const auto nn = nearest_neighbors(panel.districts, d);
    const std::size_t len = quantity.at(nn[0]).size();
    std::vector<double> out(len, 0.0);
    for (auto j : nn) {
        if (quantity.at(j).size() != len) throw DataError("spatial average: ragged series");
        for (std::size_t t = 0; t < len; ++t) out[t] += quantity[j][t];
    }
    for (auto& v : out) v /= 4.0;
    return out;
}

}  // namespace fewscast::panel
