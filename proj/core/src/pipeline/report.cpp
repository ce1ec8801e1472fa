#include "fewscast/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/corpus/gazetteer.hpp"
#include "fewscast/corpus/news_factor.hpp"
#include "fewscast/panel/dataset.hpp"
#include "fewscast/panel/validation.hpp"
#include "fewscast/semantics/clustering.hpp"
#include "fewscast/tsstats/correlation.hpp"

namespace fewscast::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per actual event, whether a predicted event in the same district was
/// matched to it (one-to-one, predicted events in period order).
std::vector<bool> matched_actual(const std::vector<outbreak::OutbreakEvent>& actual,
                                 const std::vector<outbreak::OutbreakEvent>& predicted, std::size_t window) {
    std::vector<bool> taken(actual.size(), false);
    auto order = predicted;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return std::tie(a.district_id, a.period) < std::tie(b.district_id, b.period);
    });
    for (const auto& p : order) {
        std::size_t best = actual.size();
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const auto& a = actual[i];
            if (taken[i] || a.district_id != p.district_id) continue;
            const auto gap = a.period > p.period ? a.period - p.period : p.period - a.period;
            if (gap > window) continue;
            if (best == actual.size() || a.period < actual[best].period) best = i;
        }
        if (best < actual.size()) taken[best] = true;
    }
    return taken;
}

struct Bundle {
    const PipelineConfig& config;
    fs::path run_dir;
    fs::path out_dir;
    ReportSummary summary;

    fs::path input(std::string_view stage, const std::string& file) const {
        return run_dir / std::string(stage) / file;
    }
    bool has(std::string_view stage, const std::vector<std::string>& files) const {
        return std::all_of(files.begin(), files.end(), [&](const auto& f) { return fs::exists(input(stage, f)); });
    }
    void gap(const std::string& item, const std::string& reason) { summary.gaps.push_back(item + ": " + reason); }
    fs::path output(const std::string& name) {
        summary.files.push_back(name);
        return out_dir / name;
    }
    void copy(std::string_view stage, const std::string& file, const std::string& as) {
        fs::copy_file(input(stage, file), output(as), fs::copy_options::overwrite_existing);
    }
};

struct EventTable {
    std::vector<Month> periods;
    std::vector<outbreak::OutbreakEvent> actual;
    std::map<std::string, std::vector<outbreak::OutbreakEvent>> predicted;
};

EventTable read_events(const fs::path& path, const panel::PanelDataset& data) {
    EventTable t;
    for (std::size_t m = 0; m < data.months; ++m) {
        if (std::any_of(data.published.begin(), data.published.end(), [&](const auto& s) { return std::isfinite(s[m]); })) {
            t.periods.push_back(data.first + static_cast<int>(m));
        }
    }
    const auto table = csv::read(path);
    const auto cd = table.column("district_id"), cp = table.column("period"), ck = table.column("kind"),
               cm = table.column("model"), cs = table.column("severity");
    for (const auto& row : table.rows) {
        const Month m = Month::parse(row[cp]);
        const auto it = std::lower_bound(t.periods.begin(), t.periods.end(), m);
        if (it == t.periods.end() || *it != m) throw DataError(path.string() + ": event outside publication months");
        outbreak::OutbreakEvent e{row[cd], static_cast<std::size_t>(it - t.periods.begin()), row[cs].empty() ? 0 : std::stoi(row[cs])};
        if (row[ck] == "actual") {
            t.actual.push_back(e);
        } else {
            t.predicted[row[cm]].push_back(e);
        }
    }
    return t;
}

std::map<std::string, std::map<Month, double>> monthly_predictions(const fs::path& path, const std::string& model) {
    std::map<std::string, std::map<Month, double>> out;
    for (const auto& r : panel::read_predictions_csv(path)) {
        if (r.model == model) out[r.district_id][r.month] = r.y_pred;
    }
    return out;
}

void report_percentiles(Bundle& b, const panel::PanelDataset& raw) {
    std::ofstream os(b.output("percentile_series.csv"));
    csv::Writer w(os);
    w.row({"kind", "name", "district_id", "month", "value", "percentile"});
    const auto emit = [&](const std::string& kind, const std::string& name, const std::vector<std::vector<double>>& s) {
        for (std::size_t d = 0; d < s.size(); ++d) {
            const auto pct = series_percentiles(s[d]);
            for (std::size_t t = 0; t < s[d].size(); ++t) {
                w.field(kind).field(name).field(raw.districts[d].id).field((raw.first + static_cast<int>(t)).str());
                w.field(s[d][t]).field(pct[t]);
                w.end_row();
            }
        }
    };
    for (std::size_t k = 0; k < raw.indicator_names.size(); ++k) emit("indicator", raw.indicator_names[k], raw.indicators[k]);
    for (const auto& n : raw.news) emit("news", n.feature, n.district);
}

void report_rmse(Bundle& b) {
    const auto table = csv::read(b.input("fit", "cv_country.csv"));
    const auto cm = table.column("model"), cc = table.column("country"), cr = table.column("rmse");
    std::vector<std::string> models;
    std::map<std::string, std::map<std::string, std::string>> by_country;
    for (const auto& row : table.rows) {
        if (std::find(models.begin(), models.end(), row[cm]) == models.end()) models.push_back(row[cm]);
        by_country[row[cc]][row[cm]] = row[cr];
    }
    const auto summary = csv::read(b.input("fit", "cv_summary.csv"));
    const auto sm = summary.column("model"), sr = summary.column("mean_rmse");
    for (const auto& row : summary.rows) by_country["mean"][row[sm]] = row[sr];

    std::ofstream os(b.output("rmse_by_country.csv"));
    csv::Writer w(os);
    std::vector<std::string> header = {"country"};
    header.insert(header.end(), models.begin(), models.end());
    w.row(header);
    for (const auto& [country, values] : by_country) {
        w.field(country);
        for (const auto& m : models) {
            const auto it = values.find(m);
            w.field(it == values.end() ? std::string_view{} : std::string_view(it->second));
        }
        w.end_row();
    }
}

void report_counts(Bundle& b, const EventTable& events) {
    std::ofstream os(b.output("outbreak_counts.csv"));
    csv::Writer w(os);
    w.row({"model", "severity", "actual", "detected", "missed"});
    for (const auto& [model, predicted] : events.predicted) {
        const auto hit = matched_actual(events.actual, predicted, b.config.match_window);
        for (const std::string bucket : {"3", "4-5"}) {
            std::size_t actual = 0, detected = 0;
            for (std::size_t i = 0; i < events.actual.size(); ++i) {
                const bool in = bucket == "3" ? events.actual[i].severity == 3 : events.actual[i].severity >= 4;
                if (!in) continue;
                ++actual;
                if (hit[i]) ++detected;
            }
            w.field(model).field(bucket).field(actual).field(detected).field(actual - detected);
            w.end_row();
        }
    }
}

void report_episodes(Bundle& b, const panel::PanelDataset& raw, const EventTable& events,
                     const std::vector<semantics::FeatureCluster>& clusters) {
    std::vector<std::pair<std::string, std::map<std::string, std::map<Month, double>>>> models;
    for (const std::string m : {"baseline", "combined"}) {
        models.emplace_back(m, monthly_predictions(b.input("fit", "predictions.csv"), m));
    }
    std::ofstream os(b.output("episodes.csv"));
    csv::Writer w(os);
    std::vector<std::string> header = {"district_id", "event_period", "month", "series", "value"};
    if (b.config.trailing_mean) header.push_back("trailing3_mean");
    w.row(header);
    for (const auto& e : events.actual) {
        const std::size_t d = raw.district_index(e.district_id);
        const Month at = events.periods[e.period];
        const int lo = std::max(0, (at - raw.first) - 12);
        const int hi = std::min(static_cast<int>(raw.months) - 1, (at - raw.first) + 6);
        std::vector<std::pair<std::string, std::vector<double>>> series;
        series.emplace_back("ipc", raw.ipc[d]);
        for (const auto& [name, preds] : models) {
            std::vector<double> s(raw.months, kNaN);
            if (const auto it = preds.find(e.district_id); it != preds.end()) {
                for (const auto& [m, v] : it->second) {
                    const int t = m - raw.first;
                    if (t >= 0 && t < static_cast<int>(raw.months)) s[static_cast<std::size_t>(t)] = v;
                }
            }
            series.emplace_back("prediction:" + name, std::move(s));
        }
        for (const auto& c : clusters) {
            std::vector<std::vector<double>> members;
            for (const auto& f : c.members) members.push_back(raw.news_block(f).district[d]);
            series.emplace_back("cluster:" + c.label, cluster_aggregate(members));
        }
        for (const auto& [name, s] : series) {
            const auto smooth = trailing_mean(s);
            for (int t = lo; t <= hi; ++t) {
                const auto i = static_cast<std::size_t>(t);
                w.field(e.district_id).field(at.str()).field((raw.first + t).str()).field(name).field(s[i]);
                if (b.config.trailing_mean) w.field(smooth[i]);
                w.end_row();
            }
        }
    }
}

void report_coverage(Bundle& b, const panel::PanelDataset& data, const EventTable& events) {
    std::vector<std::string> ids, provinces, countries;
    for (const auto& d : data.districts) {
        ids.push_back(d.id);
        provinces.push_back(d.province_id);
        countries.push_back(d.country);
    }
    std::vector<std::pair<std::string, std::size_t>> articles;
    const auto table = csv::read(b.input("factors", "location_counts.csv"));
    const auto cl = table.column("level"), ci = table.column("location_id"), ca = table.column("articles");
    for (const auto& row : table.rows) {
        if (row[cl] == "province") articles.emplace_back(row[ci], std::stoul(row[ca]));
    }
    const auto it = events.predicted.find("combined");
    const std::vector<outbreak::OutbreakEvent> none;
    const auto split = coverage_split(ids, provinces, countries, articles, events.actual,
                                      it == events.predicted.end() ? none : it->second, b.config.match_window);

    std::ofstream os(b.output("coverage.csv"));
    csv::Writer w(os);
    w.row({"province", "country", "articles", "outbreaks", "detected", "bucket"});
    for (const auto& p : split) {
        w.field(p.province).field(p.country).field(p.articles).field(p.outbreaks).field(p.detected);
        w.field(to_string(p.bucket));
        w.end_row();
    }

    // Histogram over log10(1 + articles), 8 equal-width bins.
    constexpr std::size_t kBins = 8;
    double top = 0.0;
    for (const auto& p : split) top = std::max(top, std::log10(1.0 + static_cast<double>(p.articles)));
    const double width = top > 0.0 ? top / kBins : 1.0;
    std::vector<std::array<std::size_t, 3>> counts(kBins, {0, 0, 0});
    for (const auto& p : split) {
        const double x = std::log10(1.0 + static_cast<double>(p.articles));
        const auto bin = std::min(kBins - 1, static_cast<std::size_t>(x / width));
        ++counts[bin][static_cast<std::size_t>(p.bucket)];
    }
    std::ofstream hs(b.output("coverage_histogram.csv"));
    csv::Writer h(hs);
    h.row({"log10_articles_low", "log10_articles_high", "all_predicted", "missed", "no_outbreaks"});
    for (std::size_t i = 0; i < kBins; ++i) {
        h.field(width * static_cast<double>(i)).field(width * static_cast<double>(i + 1));
        h.field(counts[i][0]).field(counts[i][1]).field(counts[i][2]);
        h.end_row();
    }
}

void report_cluster_correlation(Bundle& b) {
    std::ifstream in(b.input("select", "cluster_correlation.json"));
    const auto j = nlohmann::json::parse(in);
    std::ofstream os(b.output("cluster_correlation.csv"));
    csv::Writer w(os);
    w.row({"scope", "mean_correlation", "pairs"});
    const auto value = [](const nlohmann::json& v) { return v.is_null() ? kNaN : v.get<double>(); };
    w.field("intra").field(value(j.at("intra"))).field(j.at("intra_pairs").get<std::size_t>());
    w.end_row();
    w.field("inter").field(value(j.at("inter"))).field(j.at("inter_pairs").get<std::size_t>());
    w.end_row();
}

}  // namespace

std::vector<double> trailing_mean(std::span<const double> series, std::size_t window) {
    if (window == 0) throw ConfigError("trailing mean window must be positive");
    std::vector<double> out(series.size(), kNaN);
    for (std::size_t i = window - 1; i < series.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < window; ++k) sum += series[i - k];
        out[i] = sum / static_cast<double>(window);
    }
    return out;
}

std::vector<double> cluster_aggregate(const std::vector<std::vector<double>>& members) {
    if (members.empty()) return {};
    const std::size_t n = members.front().size();
    std::vector<double> out(n, 0.0);
    for (const auto& m : members) {
        if (m.size() != n) throw DataError("cluster member series differ in length");
        for (std::size_t t = 0; t < n; ++t) out[t] += m[t];
    }
    for (auto& v : out) v /= static_cast<double>(members.size());
    return out;
}

std::vector<double> series_percentiles(std::span<const double> series) {
    std::vector<double> finite;
    for (double v : series) {
        if (std::isfinite(v)) finite.push_back(v);
    }
    const auto ranks = tsstats::percentile_ranks(finite);
    std::vector<double> out(series.size(), kNaN);
    std::size_t k = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::isfinite(series[i])) out[i] = ranks[k++];
    }
    return out;
}

std::string_view to_string(CoverageBucket bucket) {
    switch (bucket) {
        case CoverageBucket::AllPredicted: return "all predicted";
        case CoverageBucket::Missed: return "missed";
        case CoverageBucket::NoOutbreaks: return "no outbreaks";
    }
    return "unknown";
}

std::vector<ProvinceCoverage> coverage_split(
    const std::vector<std::string>& district_ids, const std::vector<std::string>& district_province,
    const std::vector<std::string>& district_country,
    const std::vector<std::pair<std::string, std::size_t>>& province_articles,
    const std::vector<outbreak::OutbreakEvent>& actual,
    const std::vector<outbreak::OutbreakEvent>& predicted, std::size_t window) {
    if (district_ids.size() != district_province.size() || district_ids.size() != district_country.size()) {
        throw DataError("coverage split: district lists differ in length");
    }
    std::map<std::string, ProvinceCoverage> by_province;
    std::map<std::string, std::string> province_of;
    for (std::size_t i = 0; i < district_ids.size(); ++i) {
        province_of[district_ids[i]] = district_province[i];
        auto& p = by_province[district_province[i]];
        p.province = district_province[i];
        p.country = district_country[i];
    }
    for (const auto& [province, n] : province_articles) {
        if (const auto it = by_province.find(province); it != by_province.end()) it->second.articles = n;
    }
    const auto hit = matched_actual(actual, predicted, window);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const auto it = province_of.find(actual[i].district_id);
        if (it == province_of.end()) throw DataError("coverage split: unknown district " + actual[i].district_id);
        auto& p = by_province[it->second];
        ++p.outbreaks;
        if (hit[i]) ++p.detected;
    }
    std::vector<ProvinceCoverage> out;
    for (auto& [_, p] : by_province) {
        p.bucket = p.outbreaks == 0             ? CoverageBucket::NoOutbreaks
                   : p.detected == p.outbreaks ? CoverageBucket::AllPredicted
                                               : CoverageBucket::Missed;
        out.push_back(p);
    }
    return out;
}

ReportSummary write_report(const PipelineConfig& config, const fs::path& run_dir, const fs::path& out_dir) {
    Bundle b{config, run_dir, out_dir, {}};
    fs::create_directories(out_dir);

    std::optional<corpus::Gazetteer> gaz;
    std::optional<panel::PanelTable> table;
    try {
        gaz = corpus::Gazetteer::load(config.paths.gazetteer);
        table = panel::read_panel_csv(config.paths.panel, *gaz);
    } catch (const Error& e) {
        b.gap("panel-based tables", e.what());
    }

    std::optional<panel::PanelDataset> raw;
    std::vector<semantics::FeatureCluster> clusters;
    if (table && b.has("select", {"retained.json", "clusters.json"}) && b.has("factors", {"factors.csv"})) {
        std::vector<std::string> retained;
        std::ifstream in(b.input("select", "retained.json"));
        for (const auto& r : nlohmann::json::parse(in)) retained.push_back(r.at("feature").get<std::string>());
        raw = panel::assemble_panel(*gaz, *table, retained, corpus::read_factors_csv(b.input("factors", "factors.csv")));
        clusters = semantics::read_clusters_json(b.input("select", "clusters.json"));
    }

    if (raw) {
        report_percentiles(b, *raw);
    } else {
        b.gap("percentile_series.csv", "needs panel, factors and select outputs");
    }
    if (b.has("validate", {"cross_sections.csv", "associations.csv"})) {
        b.copy("validate", "associations.csv", "associations.csv");
        b.copy("validate", "cross_sections.csv", "cross_section_percentiles.csv");
    } else {
        b.gap("associations.csv", "validate stage outputs missing");
    }
    if (b.has("fit", {"cv_country.csv", "cv_summary.csv"})) {
        report_rmse(b);
        b.copy("fit", "cv_folds.csv", "cv_folds.csv");
    } else {
        b.gap("rmse_by_country.csv", "fit stage outputs missing");
    }
    if (b.has("classify", {"fronts.csv", "fronts_by_country.csv", "operating_points.csv", "expert.csv"})) {
        b.copy("classify", "fronts.csv", "fronts.csv");
        b.copy("classify", "fronts_by_country.csv", "fronts_by_country.csv");
        b.copy("classify", "operating_points.csv", "operating_points.csv");
        b.copy("classify", "expert.csv", "expert.csv");
    } else {
        b.gap("fronts.csv", "classify stage outputs missing");
    }

    std::optional<EventTable> events;
    if (table && b.has("classify", {"events.csv"})) {
        events = read_events(b.input("classify", "events.csv"), panel::assemble_panel(*gaz, *table, {}, {}));
        report_counts(b, *events);
    } else {
        b.gap("outbreak_counts.csv", "classify stage outputs missing");
    }
    if (raw && events && b.has("fit", {"predictions.csv"})) {
        report_episodes(b, *raw, *events, clusters);
    } else {
        b.gap("episodes.csv", "needs factors, select, fit and classify outputs");
    }
    if (b.has("select", {"cluster_correlation.json"})) {
        report_cluster_correlation(b);
    } else {
        b.gap("cluster_correlation.csv", "select stage outputs missing");
    }
    if (table && events && b.has("factors", {"location_counts.csv"})) {
        report_coverage(b, panel::assemble_panel(*gaz, *table, {}, {}), *events);
    } else {
        b.gap("coverage.csv", "needs factors and classify outputs");
    }
    if (b.has("ablate", {"ablation.csv", "ablation_districts.csv", "ablation_all.json"})) {
        b.copy("ablate", "ablation.csv", "ablation.csv");
        b.copy("ablate", "ablation_districts.csv", "ablation_districts.csv");
        b.copy("ablate", "ablation_all.json", "ablation_all.json");
    } else {
        b.gap("ablation.csv", "ablate stage outputs missing");
    }
    if (b.has("select", {"edges.csv", "edges.dot", "clusters.json"})) {
        b.copy("select", "edges.csv", "edges.csv");
        b.copy("select", "edges.dot", "edges.dot");
        b.copy("select", "clusters.json", "clusters.json");
    } else {
        b.gap("edges.csv", "select stage outputs missing");
    }

    std::ofstream gs(b.output("gaps.csv"));
    csv::Writer g(gs);
    g.row({"gap"});
    for (const auto& gap : b.summary.gaps) {
        g.field(gap);
        g.end_row();
    }
    return b.summary;
}

}  // namespace fewscast::pipeline
