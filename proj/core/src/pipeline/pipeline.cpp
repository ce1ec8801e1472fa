#include "fewscast/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include "json.hpp"

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/hash.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/corpus/corpus_index.hpp"
#include "fewscast/corpus/news_factor.hpp"
#include "fewscast/frames/extraction.hpp"
#include "fewscast/outbreak/outbreak.hpp"
#include "fewscast/panel/dataset.hpp"
#include "fewscast/panel/model.hpp"
#include "fewscast/panel/validation.hpp"
#include "fewscast/pipeline/report.hpp"
#include "fewscast/semantics/clustering.hpp"
#include "fewscast/semantics/embedding.hpp"
#include "fewscast/semantics/expansion.hpp"
#include "fewscast/tsstats/screening.hpp"

namespace fewscast::pipeline {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<Stage, std::vector<Stage>>& upstream() {
    static const std::map<Stage, std::vector<Stage>> deps = {
        {Stage::Extract, {}},
        {Stage::Expand, {Stage::Extract}},
        {Stage::Factors, {Stage::Expand}},
        {Stage::Select, {Stage::Expand, Stage::Factors}},
        {Stage::Fit, {Stage::Select}},
        {Stage::Ablate, {Stage::Select}},
        {Stage::Classify, {Stage::Fit}},
        {Stage::Validate, {Stage::Factors, Stage::Select}},
        {Stage::Report, {}},
    };
    return deps;
}

/// Raw input files each stage reads, by config key.
std::vector<std::pair<std::string, fs::path>> raw_inputs(const PipelineConfig& c, Stage s) {
    const auto& p = c.paths;
    switch (s) {
        case Stage::Extract: return {{"news_frames", p.news_frames}, {"study_frames", p.study_frames}};
        case Stage::Expand: return {{"corpus", p.corpus}, {"gazetteer", p.gazetteer}, {"embeddings", p.embeddings}};
        case Stage::Factors: return {{"corpus", p.corpus}, {"gazetteer", p.gazetteer}};
        case Stage::Select: return {{"gazetteer", p.gazetteer}, {"panel", p.panel}, {"embeddings", p.embeddings}};
        case Stage::Fit:
        case Stage::Ablate:
        case Stage::Validate: return {{"gazetteer", p.gazetteer}, {"panel", p.panel}};
        case Stage::Classify: return {{"gazetteer", p.gazetteer}, {"panel", p.panel}, {"projections", p.projections}};
        case Stage::Report: return {{"gazetteer", p.gazetteer}, {"panel", p.panel}};
    }
    return {};
}

void require_file(const fs::path& path, const std::string& what) {
    if (path.empty()) throw DataError(what + " path is not configured");
    if (!fs::exists(path)) throw DataError(what + " not found: " + path.string());
}

std::string error_kind_name(int code) {
    switch (code) {
        case 1: return "config";
        case 2: return "data";
        case 3: return "numerical";
        default: return "internal";
    }
}

void write_json(const fs::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed " + path.string() + ": " + e.what());
    }
}

struct Context {
    const PipelineConfig& config;
    fs::path run_dir;
    fs::path dir;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return dir / name;
    }
    [[nodiscard]] fs::path upstream(Stage s, const std::string& name) const {
        return run_dir / std::string(to_string(s)) / name;
    }
};

frames::ExtractionConfig extraction_config(const PipelineConfig& c) {
    frames::ExtractionConfig e;
    if (!c.target_keywords.empty()) e.targets = frames::TargetLexicon(c.target_keywords);
    if (!c.causal_links.empty()) e.links = frames::CausalLinkSet(c.causal_links);
    e.stem_dedup = c.stem_dedup;
    return e;
}

corpus::Gazetteer load_gazetteer(const PipelineConfig& c) {
    require_file(c.paths.gazetteer, "gazetteer");
    return corpus::Gazetteer::load(c.paths.gazetteer);
}

corpus::CorpusIndex load_corpus(Context& ctx, const corpus::Gazetteer& gaz) {
    require_file(ctx.config.paths.corpus, "corpus");
    corpus::IngestReport report;
    auto index = corpus::ingest_corpus(ctx.config.paths.corpus, ctx.config.window, gaz,
                                       {ctx.config.strict}, &report);
    if (!report.problems.empty()) {
        ctx.warnings.push_back(std::to_string(report.problems.size()) +
                               " corpus lines skipped, first: " + report.problems.front());
    }
    return index;
}

panel::PanelTable load_panel_table(const PipelineConfig& c, const corpus::Gazetteer& gaz) {
    require_file(c.paths.panel, "panel");
    return panel::read_panel_csv(c.paths.panel, gaz);
}

std::vector<std::string> read_feature_list(const fs::path& path) {
    std::vector<std::string> out;
    for (const auto& f : read_json(path)) out.push_back(f.at("ngram").get<std::string>());
    return out;
}

struct Retained {
    std::string feature;
    int differencing_order = 0;
};

std::vector<Retained> read_retained(const fs::path& path) {
    std::vector<Retained> out;
    for (const auto& r : read_json(path)) {
        out.push_back({r.at("feature").get<std::string>(), r.at("differencing_order").get<int>()});
    }
    return out;
}

std::vector<std::string> names_of(const std::vector<Retained>& retained) {
    std::vector<std::string> out;
    for (const auto& r : retained) out.push_back(r.feature);
    return out;
}

bool same_series(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t t = 0; t < a[i].size(); ++t) {
            const bool na = std::isnan(a[i][t]), nb = std::isnan(b[i][t]);
            if (na != nb || (!na && a[i][t] != b[i][t])) return false;
        }
    }
    return true;
}

std::vector<corpus::LocationKey> all_locations(const corpus::Gazetteer& gaz) {
    std::vector<corpus::LocationKey> out;
    for (const auto& d : gaz.districts()) out.push_back({corpus::Level::District, d.id});
    for (const auto& p : gaz.provinces()) out.push_back({corpus::Level::Province, p});
    for (const auto& c : gaz.countries()) out.push_back({corpus::Level::Country, c});
    return out;
}

panel::ModelSpec base_spec(const PipelineConfig& c, panel::ModelKind kind) {
    panel::ModelSpec s;
    s.kind = kind;
    s.country_slopes = c.country_slopes;
    return s;
}

std::vector<std::pair<std::string, panel::ModelSpec>> model_specs(const PipelineConfig& c) {
    using panel::ModelKind;
    std::vector<std::pair<std::string, panel::ModelSpec>> out = {
        {"baseline", base_spec(c, ModelKind::Baseline)},
        {"news", base_spec(c, ModelKind::News)},
        {"combined", base_spec(c, ModelKind::Combined)},
    };
    if (c.spatial) {
        auto s = base_spec(c, ModelKind::Combined);
        s.spatial = true;
        out.emplace_back("combined_spatial", s);
    }
    if (c.lasso_lambda) {
        auto s = base_spec(c, ModelKind::Combined);
        s.lasso_lambda = c.lasso_lambda;
        out.emplace_back("combined_lasso", s);
    }
    return out;
}

/// Panel with the retained features' transformed factors.
panel::PanelDataset modeling_panel(const Context& ctx, const corpus::Gazetteer& gaz) {
    const auto table = load_panel_table(ctx.config, gaz);
    const auto retained = read_retained(ctx.upstream(Stage::Select, "retained.json"));
    const auto factors = corpus::read_factors_csv(ctx.upstream(Stage::Select, "factors_transformed.csv"));
    return panel::assemble_panel(gaz, table, names_of(retained), factors);
}

// ---------------------------------------------------------------- stages

void stage_extract(Context& ctx) {
    const auto& p = ctx.config.paths;
    require_file(p.news_frames, "news frames");
    if (!p.study_frames.empty()) require_file(p.study_frames, "study frames");
    const auto seeds = frames::run_extraction(p.news_frames, p.study_frames, extraction_config(ctx.config));
    frames::write_seeds_json(ctx.out("seeds.json"), seeds.features);
    Json summary{{"news_frames", seeds.news_frames},
                 {"news_retained", seeds.news_retained},
                 {"study_frames", seeds.study_frames},
                 {"study_retained", seeds.study_retained},
                 {"seeds", seeds.features.size()}};
    write_json(ctx.out("extraction.json"), summary);
    if (seeds.features.empty()) ctx.warnings.push_back("no frame passed the filters; seed set is empty");
}

void stage_expand(Context& ctx) {
    const auto seeds = frames::read_seeds_json(ctx.upstream(Stage::Extract, "seeds.json"));
    require_file(ctx.config.paths.embeddings, "embeddings file");
    const auto embeddings = semantics::load_embeddings(ctx.config.paths.embeddings, &ctx.warnings);
    const auto gaz = load_gazetteer(ctx.config);
    const auto index = load_corpus(ctx, gaz);

    std::vector<std::string> seed_names;
    for (const auto& s : seeds) seed_names.push_back(s.ngram);
    const auto candidates = semantics::enumerate_candidates(index, ctx.config.ngram_min_count);
    const auto result = semantics::expand_seeds(seed_names, candidates, embeddings, ctx.config.wmd_radius);
    if (result.skipped_seeds > 0) {
        ctx.warnings.push_back(std::to_string(result.skipped_seeds) + " seeds without embeddings");
    }
    semantics::write_expanded_json(ctx.out("expanded.json"), result.features);

    Json features = Json::array();
    for (const auto& s : seeds) {
        Json origins = Json::array();
        for (auto o : s.provenance) origins.push_back(std::string(frames::to_string(o)));
        features.push_back({{"ngram", s.ngram}, {"origin", origins}});
    }
    for (const auto& e : result.features) {
        features.push_back({{"ngram", e.ngram},
                            {"origin", Json::array({std::string(frames::to_string(frames::FeatureOrigin::Expanded))})},
                            {"nearest_seed", e.nearest_seed},
                            {"distance", e.distance}});
    }
    write_json(ctx.out("features.json"), features);
    write_json(ctx.out("expansion.json"), {{"candidates", candidates.size()},
                                           {"skipped_candidates", result.skipped_candidates},
                                           {"skipped_seeds", result.skipped_seeds},
                                           {"expanded", result.features.size()}});
}

void stage_factors(Context& ctx) {
    const auto features = read_feature_list(ctx.upstream(Stage::Expand, "features.json"));
    const auto gaz = load_gazetteer(ctx.config);
    const auto index = load_corpus(ctx, gaz);

    corpus::FactorOptions options;
    options.denominator = ctx.config.denominator;
    corpus::ArticleMask mask;
    if (ctx.config.exclude_target_articles) {
        const auto targets = extraction_config(ctx.config).targets;
        mask = corpus::mark_articles(index, [&](const corpus::Article& a) { return targets.matches(a.tokens); });
        options.excluded = &mask;
        const auto n = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
        ctx.warnings.push_back("excluded " + std::to_string(n) + " articles mentioning target keywords");
    }
    const auto locations = all_locations(gaz);
    const auto factors = corpus::compute_news_factors(features, locations, index, options);
    corpus::write_factors_csv(ctx.out("factors.csv"), factors);

    std::ofstream counts(ctx.out("location_counts.csv"));
    csv::Writer w(counts);
    w.row({"level", "location_id", "articles"});
    for (const auto& key : locations) {
        std::size_t n = 0;
        for (auto id : index.location_postings(key)) {
            if (mask.empty() || !mask[id]) ++n;
        }
        w.field(corpus::to_string(key.level)).field(key.id).field(n);
        w.end_row();
    }
}

void stage_select(Context& ctx) {
    const auto features = read_feature_list(ctx.upstream(Stage::Expand, "features.json"));
    const auto gaz = load_gazetteer(ctx.config);
    const auto table = load_panel_table(ctx.config, gaz);
    const auto factors = corpus::read_factors_csv(ctx.upstream(Stage::Factors, "factors.csv"));
    const auto panel = panel::assemble_panel(gaz, table, features, factors);

    const auto results = tsstats::select_features(
        features, panel.ipc, [&](const std::string& f) { return panel.news_block(f).district; },
        ctx.config.screening);
    tsstats::write_screening_csv(ctx.out("screening.csv"), results);

    std::vector<std::string> passed;
    std::map<std::string, const tsstats::ScreeningResult*> by_feature;
    for (const auto& r : results) {
        by_feature[r.feature] = &r;
        if (r.retained) passed.push_back(r.feature);
    }
    if (passed.empty()) ctx.warnings.push_back("no feature passed screening");

    // Features with identical factor series at every level enter the model once,
    // under the longest n-gram.
    std::vector<std::string> retained;
    std::map<std::string, std::string> duplicate_of;
    for (const auto& f : passed) {
        const auto& block = panel.news_block(f);
        const auto match = std::find_if(retained.begin(), retained.end(), [&](const std::string& g) {
            const auto& other = panel.news_block(g);
            return same_series(block.district, other.district) && same_series(block.province, other.province) &&
                   same_series(block.country, other.country);
        });
        if (match == retained.end()) {
            retained.push_back(f);
        } else if (text::split(f).size() > text::split(*match).size()) {
            duplicate_of[*match] = f;
            for (auto& [_, kept] : duplicate_of) {
                if (kept == *match) kept = f;
            }
            *match = f;
        } else {
            duplicate_of[f] = *match;
        }
    }
    std::ofstream dup_out(ctx.out("duplicates.csv"));
    csv::Writer dup(dup_out);
    dup.row({"feature", "kept_as"});
    for (const auto& [f, kept] : duplicate_of) {
        dup.field(f).field(kept);
        dup.end_row();
    }

    require_file(ctx.config.paths.embeddings, "embeddings file");
    const auto embeddings = semantics::load_embeddings(ctx.config.paths.embeddings);
    std::vector<std::string> embedded, unembedded;
    for (const auto& f : retained) {
        (semantics::embeddable(f, embeddings) ? embedded : unembedded).push_back(f);
    }
    const auto distances = semantics::pairwise_wmd(embedded, embeddings);
    std::vector<semantics::FeatureCluster> clusters;
    if (!embedded.empty()) {
        const std::size_t k = std::min(ctx.config.clusters, embedded.size());
        if (k < ctx.config.clusters) {
            ctx.warnings.push_back("only " + std::to_string(embedded.size()) + " embeddable retained features; using " +
                                   std::to_string(k) + " clusters");
        }
        clusters = semantics::cluster_by_distance(embedded, distances, k);
        for (auto& c : clusters) c.label = c.members.front();
    }
    if (!unembedded.empty()) {
        ctx.warnings.push_back(std::to_string(unembedded.size()) + " retained features lack embeddings; grouped as 'unembedded'");
        clusters.push_back({static_cast<int>(clusters.size()) + 1, "unembedded", unembedded});
    }
    semantics::write_clusters_json(ctx.out("clusters.json"), clusters);

    std::map<std::string, std::vector<double>> series;
    for (const auto& f : retained) {
        auto& s = series[f];
        for (const auto& d : panel.news_block(f).district) s.insert(s.end(), d.begin(), d.end());
    }
    const auto cc = semantics::cluster_validation(clusters, series);
    const auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    write_json(ctx.out("cluster_correlation.json"), {{"intra", num(cc.intra)},
                                                     {"inter", num(cc.inter)},
                                                     {"intra_pairs", cc.intra_pairs},
                                                     {"inter_pairs", cc.inter_pairs},
                                                     {"excluded", cc.excluded}});
    semantics::write_similarity_edges_csv(ctx.out("edges.csv"), embedded, distances, ctx.config.edge_max_distance);
    semantics::write_similarity_edges_dot(ctx.out("edges.dot"), embedded, distances, ctx.config.edge_max_distance);

    std::map<std::string, int> cluster_of;
    for (const auto& c : clusters) {
        for (const auto& m : c.members) cluster_of[m] = c.cluster_id;
    }
    Json kept = Json::array();
    for (const auto& f : retained) {
        const auto& r = *by_feature.at(f);
        kept.push_back({{"feature", f},
                        {"differencing_order", r.differencing_order},
                        {"F", r.f},
                        {"p", r.p_value},
                        {"lags", r.lags},
                        {"cluster", cluster_of.at(f)}});
    }
    write_json(ctx.out("retained.json"), kept);

    std::vector<corpus::NewsFactorSeries> transformed;
    for (const auto& s : factors) {
        const auto it = by_feature.find(s.feature);
        if (it == by_feature.end() || std::find(retained.begin(), retained.end(), s.feature) == retained.end()) continue;
        transformed.push_back(panel::difference_factor(s, it->second->differencing_order));
    }
    corpus::write_factors_csv(ctx.out("factors_transformed.csv"), transformed);
}

void stage_fit(Context& ctx) {
    const auto gaz = load_gazetteer(ctx.config);
    const auto data = modeling_panel(ctx, gaz);

    std::vector<panel::PredictionRecord> records;
    std::ofstream folds_out(ctx.out("cv_folds.csv"));
    csv::Writer folds(folds_out);
    folds.row({"model", "fold", "test_first", "test_last", "train_rows", "test_rows", "rmse", "warning"});
    std::ofstream summary_out(ctx.out("cv_summary.csv"));
    csv::Writer summary(summary_out);
    summary.row({"model", "mean_rmse", "columns", "predictions", "look_ahead_violations"});
    std::ofstream country_out(ctx.out("cv_country.csv"));
    csv::Writer country(country_out);
    country.row({"model", "country", "rmse"});
    std::ofstream audit_out(ctx.out("audit.csv"));
    csv::Writer audit(audit_out);
    audit.row({"model", "district_id", "month", "column", "regressor_month"});

    for (const auto& [name, spec] : model_specs(ctx.config)) {
        const auto report = panel::cross_validate(data, spec, ctx.config.folds);
        for (const auto& w : report.warnings) ctx.warnings.push_back(name + ": " + w);
        for (const auto& f : report.folds) {
            folds.field(name).field(f.fold).field(f.test_first.str()).field(f.test_last.str());
            folds.field(f.train_rows).field(f.test_rows).field(f.rmse).field(f.warning);
            folds.end_row();
        }
        for (const auto& [c, r] : report.country_rmse) {
            country.field(name).field(c).field(r);
            country.end_row();
        }
        const auto layout = panel::make_layout(data, spec);
        const auto violations = panel::audit_look_ahead(layout, report.predictions);
        for (const auto& v : violations) {
            audit.field(name).field(data.districts[v.district].id).field(v.month.str());
            audit.field(v.column).field(v.regressor_month.str());
            audit.end_row();
        }
        summary.field(name).field(report.mean_rmse).field(layout.size()).field(report.predictions.size());
        summary.field(violations.size());
        summary.end_row();

        const auto [first, last] = panel::modeling_range(data, spec);
        const auto full = panel::fit(data, spec, first, last);
        panel::write_model_json(ctx.out("model_" + name + ".json"), full, &report);
        const auto recs = panel::prediction_records(data, report, name);
        records.insert(records.end(), recs.begin(), recs.end());
    }
    panel::write_predictions_csv(ctx.out("predictions.csv"), records);
}

void stage_ablate(Context& ctx) {
    const auto gaz = load_gazetteer(ctx.config);
    const auto data = modeling_panel(ctx, gaz);
    const auto clusters = semantics::read_clusters_json(ctx.upstream(Stage::Select, "clusters.json"));
    const auto spec = base_spec(ctx.config, panel::ModelKind::Combined);
    const auto folds = ctx.config.folds;

    const auto reference = panel::cross_validate(data, spec, folds);
    const auto results = panel::ablate(data, spec, clusters, reference, folds);

    std::ofstream table_out(ctx.out("ablation.csv"));
    csv::Writer table(table_out);
    table.row({"cluster", "label", "features", "mean_rmse", "delta"});
    std::ofstream district_out(ctx.out("ablation_districts.csv"));
    csv::Writer district(district_out);
    district.row({"cluster", "district_id", "delta"});
    for (const auto& r : results) {
        std::string members;
        for (const auto& f : r.features) members += (members.empty() ? "" : "|") + f;
        table.field(r.cluster_id).field(r.label).field(members).field(r.mean_rmse).field(r.delta);
        table.end_row();
        for (std::size_t d = 0; d < r.district_delta.size(); ++d) {
            district.field(r.cluster_id).field(data.districts[d].id).field(r.district_delta[d]);
            district.end_row();
        }
    }

    std::set<int> every;
    for (const auto& c : clusters) every.insert(c.cluster_id);
    const auto none = panel::cross_validate(data, panel::without_clusters(spec, clusters, every), folds);
    const auto baseline = panel::cross_validate(data, base_spec(ctx.config, panel::ModelKind::Baseline), folds);
    const auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    write_json(ctx.out("ablation_all.json"), {{"combined_rmse", num(reference.mean_rmse)},
                                              {"all_clusters_removed_rmse", num(none.mean_rmse)},
                                              {"baseline_rmse", num(baseline.mean_rmse)},
                                              {"identical", none.mean_rmse == baseline.mean_rmse}});
}

struct PeriodData {
    outbreak::PeriodPanel actual;
    std::vector<std::pair<std::string, outbreak::PeriodPanel>> predictions;
};

outbreak::PeriodPanel subset(const outbreak::PeriodPanel& p, const std::string& country) {
    outbreak::PeriodPanel out;
    out.periods = p.periods;
    for (std::size_t i = 0; i < p.district_ids.size(); ++i) {
        if (p.countries[i] != country) continue;
        out.district_ids.push_back(p.district_ids[i]);
        out.countries.push_back(p.countries[i]);
        out.values.push_back(p.values[i]);
    }
    return out;
}

PeriodData period_data(const panel::PanelDataset& data, const std::vector<panel::PredictionRecord>& records) {
    std::set<Month> predicted_months;
    for (const auto& r : records) predicted_months.insert(r.month);
    PeriodData out;
    auto& a = out.actual;
    for (std::size_t t = 0; t < data.months; ++t) {
        const Month m = data.first + static_cast<int>(t);
        if (!predicted_months.count(m)) continue;
        const bool published = std::any_of(data.published.begin(), data.published.end(),
                                           [&](const auto& s) { return std::isfinite(s[t]); });
        if (published) a.periods.push_back(m);
    }
    for (std::size_t d = 0; d < data.districts.size(); ++d) {
        a.district_ids.push_back(data.districts[d].id);
        a.countries.push_back(data.districts[d].country);
        a.values.push_back(outbreak::downsample(data.published[d], data.first, a.periods));
    }
    std::map<std::string, std::size_t> period_index;
    for (std::size_t i = 0; i < a.periods.size(); ++i) period_index[a.periods[i].str()] = i;
    for (const auto& r : records) {
        auto it = std::find_if(out.predictions.begin(), out.predictions.end(),
                               [&](const auto& p) { return p.first == r.model; });
        if (it == out.predictions.end()) {
            outbreak::PeriodPanel p = a;
            for (auto& row : p.values) std::fill(row.begin(), row.end(), kNaN);
            out.predictions.emplace_back(r.model, std::move(p));
            it = std::prev(out.predictions.end());
        }
        const auto pi = period_index.find(r.month.str());
        if (pi == period_index.end()) continue;
        it->second.values[data.district_index(r.district_id)][pi->second] = r.y_pred;
    }
    return out;
}

outbreak::PeriodPanel read_projections(const fs::path& path, const outbreak::PeriodPanel& grid) {
    const auto table = csv::read(path);
    const auto cd = table.column("district_id");
    const auto cp = table.column("period");
    const auto cv = table.column("projected_phase");
    outbreak::PeriodPanel out = grid;
    for (auto& row : out.values) std::fill(row.begin(), row.end(), kNaN);
    std::map<std::string, std::size_t> row_of, period_of;
    for (std::size_t i = 0; i < grid.district_ids.size(); ++i) row_of[grid.district_ids[i]] = i;
    for (std::size_t i = 0; i < grid.periods.size(); ++i) period_of[grid.periods[i].str()] = i;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const auto d = row_of.find(row[cd]);
        const auto p = period_of.find(Month::parse(row[cp]).str());
        if (d == row_of.end() || p == period_of.end() || row[cv].empty()) continue;
        try {
            out.values[d->second][p->second] = std::stod(row[cv]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[i]) +
                            ": projected_phase is not a number");
        }
    }
    return out;
}

void stage_classify(Context& ctx) {
    const auto gaz = load_gazetteer(ctx.config);
    const auto table = load_panel_table(ctx.config, gaz);
    const auto data = panel::assemble_panel(gaz, table, {}, {});
    const auto records = panel::read_predictions_csv(ctx.upstream(Stage::Fit, "predictions.csv"));
    const auto pd = period_data(data, records);
    const auto& c = ctx.config;

    outbreak::GridOptions grid;
    grid.lo_tenths = static_cast<int>(std::lround(c.grid_min * 10));
    grid.hi_tenths = static_cast<int>(std::lround(c.grid_max * 10));
    grid.allow_crossed = c.crossed_thresholds;
    grid.window = c.match_window;

    std::vector<std::string> scopes = {"all"};
    for (const auto& country : data.countries) scopes.push_back(country);
    const auto scoped = [&](const outbreak::PeriodPanel& p, const std::string& scope) {
        return scope == "all" ? p : subset(p, scope);
    };

    std::vector<std::pair<std::string, std::vector<outbreak::FrontPoint>>> global_fronts;
    std::ofstream fronts_out(ctx.out("fronts_by_country.csv"));
    csv::Writer fronts(fronts_out);
    fronts.row({"scope", "model", "l", "u", "precision", "recall"});
    std::ofstream ops_out(ctx.out("operating_points.csv"));
    csv::Writer ops(ops_out);
    ops.row({"scope", "model", "l", "u", "precision", "recall", "status"});
    std::vector<outbreak::EventRecord> events;

    const auto all_actual = outbreak::detect_outbreaks(pd.actual);
    for (const auto& e : all_actual) {
        events.push_back({e.district_id, pd.actual.periods[e.period], "actual", "", e.severity});
    }
    for (const auto& scope : scopes) {
        const auto actual_panel = scoped(pd.actual, scope);
        const auto actual = outbreak::detect_outbreaks(actual_panel);
        for (const auto& [model, predictions] : pd.predictions) {
            const auto pred = scoped(predictions, scope);
            const auto front = outbreak::sweep_pareto(pred, actual, grid);
            for (const auto& f : front) {
                fronts.field(scope).field(model).field(f.l).field(f.u);
                fronts.field(f.precision ? *f.precision : kNaN).field(f.recall);
                fronts.end_row();
            }
            if (scope == "all") global_fronts.emplace_back(model, front);
            try {
                const auto op = outbreak::recall_at_precision(front, c.precision_target);
                ops.field(scope).field(model).field(op.l).field(op.u);
                ops.field(op.precision ? *op.precision : kNaN).field(op.recall).field("ok");
                if (scope == "all") {
                    for (const auto& e : outbreak::classify(pred, op.l, op.u)) {
                        events.push_back({e.district_id, pred.periods[e.period], "predicted", model, 0});
                    }
                }
            } catch (const outbreak::UnattainablePrecisionError& e) {
                ops.field(scope).field(model).field(kNaN).field(kNaN).field(e.best_precision()).field(0.0);
                ops.field("unattainable");
            }
            ops.end_row();
        }
    }
    outbreak::write_front_csv(ctx.out("fronts.csv"), global_fronts);
    outbreak::write_events_csv(ctx.out("events.csv"), events);

    std::ofstream expert_out(ctx.out("expert.csv"));
    csv::Writer expert(expert_out);
    expert.row({"scope", "matched", "predicted", "actual", "precision", "recall", "skipped"});
    if (c.paths.projections.empty()) {
        ctx.warnings.push_back("no expert projections configured");
    } else {
        require_file(c.paths.projections, "expert projections");
        const auto projections = read_projections(c.paths.projections, pd.actual);
        for (const auto& scope : scopes) {
            const auto s = outbreak::expert_baseline(scoped(projections, scope),
                                                     outbreak::detect_outbreaks(scoped(pd.actual, scope)),
                                                     c.match_window);
            expert.field(scope).field(s.score.matched).field(s.score.predicted).field(s.score.actual);
            expert.field(s.score.precision ? *s.score.precision : kNaN);
            expert.field(s.score.recall ? *s.score.recall : kNaN).field(s.skipped);
            expert.end_row();
        }
    }
}

void stage_validate(Context& ctx) {
    const auto gaz = load_gazetteer(ctx.config);
    const auto table = load_panel_table(ctx.config, gaz);
    const auto retained = names_of(read_retained(ctx.upstream(Stage::Select, "retained.json")));
    const auto factors = corpus::read_factors_csv(ctx.upstream(Stage::Factors, "factors.csv"));
    const auto data = panel::assemble_panel(gaz, table, retained, factors);
    const auto associations = panel::validate_factors(data);

    std::ofstream a_out(ctx.out("associations.csv"));
    csv::Writer a(a_out);
    a.row({"indicator", "feature", "spearman", "districts"});
    std::ofstream p_out(ctx.out("cross_sections.csv"));
    csv::Writer p(p_out);
    p.row({"indicator", "feature", "district_id", "indicator_percentile", "feature_percentile"});
    for (const auto& r : associations) {
        a.field(r.indicator).field(r.feature).field(r.spearman).field(r.district_ids.size());
        a.end_row();
        for (std::size_t i = 0; i < r.district_ids.size(); ++i) {
            p.field(r.indicator).field(r.feature).field(r.district_ids[i]);
            p.field(r.indicator_percentiles[i]).field(r.feature_percentiles[i]);
            p.end_row();
        }
    }
}

void stage_report(Context& ctx) {
    const auto summary = write_report(ctx.config, ctx.run_dir, ctx.dir);
    for (const auto& f : summary.files) ctx.outputs.push_back(f);
    for (const auto& g : summary.gaps) ctx.warnings.push_back("report gap: " + g);
}

void run_body(Stage s, Context& ctx) {
    switch (s) {
        case Stage::Extract: return stage_extract(ctx);
        case Stage::Expand: return stage_expand(ctx);
        case Stage::Factors: return stage_factors(ctx);
        case Stage::Select: return stage_select(ctx);
        case Stage::Fit: return stage_fit(ctx);
        case Stage::Ablate: return stage_ablate(ctx);
        case Stage::Classify: return stage_classify(ctx);
        case Stage::Validate: return stage_validate(ctx);
        case Stage::Report: return stage_report(ctx);
    }
}

Json manifest_json(const Manifest& m) {
    Json j;
    j["stage"] = m.stage;
    j["status"] = m.status;
    if (!m.error.empty()) {
        j["error"] = m.error;
        j["error_kind"] = error_kind_name(m.exit_code);
        j["exit_code"] = m.exit_code;
    }
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["warnings"] = m.warnings;
    return j;
}

}  // namespace

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::Extract: return "extract";
        case Stage::Expand: return "expand";
        case Stage::Factors: return "factors";
        case Stage::Select: return "select";
        case Stage::Fit: return "fit";
        case Stage::Ablate: return "ablate";
        case Stage::Classify: return "classify";
        case Stage::Validate: return "validate";
        case Stage::Report: return "report";
    }
    return "unknown";
}

Stage parse_stage(std::string_view name) {
    for (auto s : all_stages()) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages = {Stage::Extract, Stage::Expand,   Stage::Factors,
                                              Stage::Select,  Stage::Fit,      Stage::Ablate,
                                              Stage::Classify, Stage::Validate, Stage::Report};
    return stages;
}

std::optional<Manifest> read_manifest(const fs::path& dir) {
    const auto path = dir / "manifest.json";
    if (!fs::exists(path)) return std::nullopt;
    const auto j = read_json(path);
    Manifest m;
    try {
        m.stage = j.at("stage").get<std::string>();
        m.status = j.at("status").get<std::string>();
        m.error = j.value("error", std::string{});
        m.exit_code = j.value("exit_code", 0);
        m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        m.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest " + path.string() + ": " + e.what());
    }
    return m;
}

Pipeline::Pipeline(PipelineConfig config, std::ostream* log) : config_(std::move(config)), log_(log) {
    validate_config(config_, false);
}

fs::path Pipeline::stage_dir(Stage stage) const { return config_.paths.output / std::string(to_string(stage)); }

StageStatus Pipeline::run_stage(Stage stage, bool force) {
    const auto name = std::string(to_string(stage));
    const auto dir = stage_dir(stage);

    Manifest m;
    m.stage = name;
    m.inputs["config"] = ContentHash().update(config_fingerprint(config_, name)).hex();
    for (const auto& [key, path] : raw_inputs(config_, stage)) {
        if (!path.empty() && fs::exists(path)) m.inputs[key] = hash_file(path);
    }
    if (stage == Stage::Report) {
        for (auto s : all_stages()) {
            if (s == Stage::Report) continue;
            const auto up = read_manifest(stage_dir(s));
            if (up && up->status == "ok") {
                for (const auto& [file, hash] : up->outputs) m.inputs[std::string(to_string(s)) + "/" + file] = hash;
            }
        }
    }
    for (auto s : upstream().at(stage)) {
        const auto up = read_manifest(stage_dir(s));
        if (!up || up->status != "ok") {
            throw DataError("stage '" + name + "' needs the outputs of stage '" + std::string(to_string(s)) +
                            "'; run it first");
        }
        for (const auto& [file, hash] : up->outputs) m.inputs[std::string(to_string(s)) + "/" + file] = hash;
    }

    if (!force) {
        if (const auto previous = read_manifest(dir); previous && previous->status == "ok" &&
                                                      previous->inputs == m.inputs) {
            const bool intact = std::all_of(previous->outputs.begin(), previous->outputs.end(), [&](const auto& o) {
                return fs::exists(dir / o.first) && hash_file(dir / o.first) == o.second;
            });
            if (intact) {
                if (log_) *log_ << "[" << name << "] up to date\n";
                return {stage, true, previous->warnings};
            }
        }
    }

    fs::remove_all(dir);
    fs::create_directories(dir);
    Context ctx{config_, config_.paths.output, dir, {}, {}};
    if (log_) *log_ << "[" << name << "] running\n";
    try {
        run_body(stage, ctx);
    } catch (const Error& e) {
        m.status = "failed";
        m.error = e.what();
        m.exit_code = e.exit_code();
        m.warnings = ctx.warnings;
        write_json(dir / "manifest.json", manifest_json(m));
        throw;
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = e.what();
        m.exit_code = static_cast<int>(ErrorKind::Data);
        m.warnings = ctx.warnings;
        write_json(dir / "manifest.json", manifest_json(m));
        throw;
    }
    m.status = "ok";
    for (const auto& f : ctx.outputs) m.outputs[f] = hash_file(dir / f);
    m.warnings = ctx.warnings;
    write_json(dir / "manifest.json", manifest_json(m));
    if (log_) {
        for (const auto& w : ctx.warnings) *log_ << "[" << name << "] warning: " << w << '\n';
    }
    return {stage, false, ctx.warnings};
}

std::vector<StageStatus> Pipeline::run(std::optional<Stage> until, bool force) {
    std::vector<StageStatus> out;
    for (auto s : all_stages()) {
        out.push_back(run_stage(s, force));
        if (until && s == *until) break;
    }
    return out;
}

std::vector<StageStatus> run_pipeline(const PipelineConfig& config, std::optional<Stage> until, std::ostream* log) {
    Pipeline p(config, log);
    return p.run(until);
}

}  // namespace fewscast::pipeline
