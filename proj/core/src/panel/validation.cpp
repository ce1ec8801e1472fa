#include "fewscast/panel/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/tsstats/correlation.hpp"

namespace fewscast::panel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Design select_rows(const Design& full, const std::vector<std::size_t>& idx) {
    Design out;
    out.layout = full.layout;
    out.X.resize(static_cast<Eigen::Index>(idx.size()), full.X.cols());
    out.y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = full.X.row(static_cast<Eigen::Index>(idx[i]));
        out.y[static_cast<Eigen::Index>(i)] = full.y[static_cast<Eigen::Index>(idx[i])];
        out.rows.push_back(full.rows[idx[i]]);
    }
    return out;
}

double rmse_of(double sum_sq, std::size_t n) {
    return n == 0 ? kNaN : std::sqrt(sum_sq / static_cast<double>(n));
}

}  // namespace

std::vector<double> CVReport::district_rmse(std::size_t districts) const {
    std::vector<double> sq(districts, 0.0);
    std::vector<std::size_t> n(districts, 0);
    for (const auto& p : predictions) {
        const double e = p.y_pred - p.y_true;
        sq.at(p.district) += e * e;
        ++n[p.district];
    }
    std::vector<double> out(districts);
    for (std::size_t d = 0; d < districts; ++d) out[d] = rmse_of(sq[d], n[d]);
    return out;
}

std::pair<Month, Month> modeling_range(const PanelDataset& panel, const ModelSpec& spec) {
    return {panel.first + spec.lag_reach(), panel.last()};
}

std::vector<std::pair<Month, Month>> make_folds(Month first, Month last, std::size_t folds) {
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (last < first) throw ConfigError("cross-validation: empty month range");
    const auto months = static_cast<std::size_t>(last - first) + 1;
    if (months < folds) {
        throw ConfigError("cannot split " + std::to_string(months) + " months into " +
                          std::to_string(folds) + " folds");
    }
    const auto len = static_cast<int>(months / folds);
    std::vector<std::pair<Month, Month>> out;
    for (std::size_t i = 0; i < folds; ++i) {
        const Month a = first + static_cast<int>(i) * len;
        const Month b = i + 1 == folds ? last : a + (len - 1);
        out.emplace_back(a, b);
    }
    return out;
}

CVReport cross_validate(const PanelDataset& panel, const ModelSpec& spec, std::size_t folds) {
    const auto [first, last] = modeling_range(panel, spec);
    const auto blocks = make_folds(first, last, folds);
    const Design full = build_design(panel, spec, first, last);

    CVReport report;
    report.spec = spec;
    std::map<std::string, std::vector<double>> per_country;
    double rmse_sum = 0.0;
    std::size_t rmse_count = 0;
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        FoldResult fr;
        fr.fold = i + 1;
        fr.test_first = blocks[i].first;
        fr.test_last = blocks[i].second;
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < full.rows.size(); ++r) {
            const Month m = full.rows[r].month;
            if (m < fr.test_first) {
                train.push_back(r);
            } else if (m <= fr.test_last) {
                test.push_back(r);
            }
        }
        fr.train_rows = train.size();
        fr.test_rows = test.size();
        if (train.empty() || test.empty()) {
            fr.warning = train.empty() ? "no valid training rows" : "no valid test rows";
        } else {
            try {
                const auto model = fit_design(select_rows(full, train), spec);
                double sq = 0.0;
                std::map<std::string, std::pair<double, std::size_t>> country_sq;
                for (auto r : test) {
                    const auto& row = full.rows[r];
                    const auto xr = full.X.row(static_cast<Eigen::Index>(r));
                    std::vector<double> x(static_cast<std::size_t>(full.X.cols()));
                    for (Eigen::Index j = 0; j < full.X.cols(); ++j) x[static_cast<std::size_t>(j)] = xr[j];
                    const double pred = model.predict(x, row.district);
                    const double truth = full.y[static_cast<Eigen::Index>(r)];
                    const double e = pred - truth;
                    sq += e * e;
                    auto& c = country_sq[panel.districts[row.district].country];
                    c.first += e * e;
                    ++c.second;
                    report.predictions.push_back(
                        {row.district, row.month, truth, pred, fr.fold, fr.test_first - 1,
                         row.latest_regressor});
                }
                fr.rmse = rmse_of(sq, test.size());
                rmse_sum += fr.rmse;
                ++rmse_count;
                for (const auto& [country, v] : country_sq) {
                    per_country[country].push_back(rmse_of(v.first, v.second));
                }
            } catch (const NumericalError& e) {
                fr.warning = e.what();
            }
        }
        if (!fr.warning.empty()) {
            report.warnings.push_back("fold " + std::to_string(fr.fold) + " excluded: " +
                                      fr.warning);
        }
        report.folds.push_back(std::move(fr));
    }
    if (rmse_count > 0) report.mean_rmse = rmse_sum / static_cast<double>(rmse_count);
    for (const auto& [country, values] : per_country) {
        double s = 0.0;
        for (double v : values) s += v;
        report.country_rmse[country] = s / static_cast<double>(values.size());
    }
    return report;
}

ModelSpec without_clusters(const ModelSpec& spec,
                           const std::vector<semantics::FeatureCluster>& clusters,
                           const std::set<int>& cluster_ids) {
    ModelSpec out = spec;
    for (const auto& c : clusters) {
        if (!cluster_ids.contains(c.cluster_id)) continue;
        out.ablated_clusters.insert(c.cluster_id);
        out.ablated_features.insert(c.members.begin(), c.members.end());
    }
    for (int id : cluster_ids) {
        const bool known = std::any_of(clusters.begin(), clusters.end(),
                                       [&](const auto& c) { return c.cluster_id == id; });
        if (!known) throw ConfigError("unknown cluster " + std::to_string(id));
    }
    return out;
}

std::vector<AblationResult> ablate(const PanelDataset& panel, const ModelSpec& spec,
                                   const std::vector<semantics::FeatureCluster>& clusters,
                                   const CVReport& reference, std::size_t folds) {
    const auto ref_district = reference.district_rmse(panel.districts.size());
    std::vector<AblationResult> out;
    for (const auto& c : clusters) {
        const auto reduced = without_clusters(spec, clusters, {c.cluster_id});
        const auto report = cross_validate(panel, reduced, folds);
        AblationResult r;
        r.cluster_id = c.cluster_id;
        r.label = c.label;
        r.features = c.members;
        r.mean_rmse = report.mean_rmse;
        r.delta = report.mean_rmse - reference.mean_rmse;
        const auto district = report.district_rmse(panel.districts.size());
        for (std::size_t d = 0; d < district.size(); ++d) {
            r.district_delta.push_back(district[d] - ref_district[d]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<LookAheadViolation> audit_look_ahead(const DesignLayout& layout,
                                                 const std::vector<Prediction>& predictions,
                                                 int horizon) {
    std::vector<LookAheadViolation> out;
    for (const auto& p : predictions) {
        const Month limit = p.month - horizon;
        for (const auto& c : layout.columns) {
            if (!c.dated()) continue;
            const Month used = p.month - c.lag;
            if (used > limit) out.push_back({p.district, p.month, c.name, used});
        }
        if (p.latest_regressor > limit) {
            out.push_back({p.district, p.month, "latest regressor", p.latest_regressor});
        }
        if (!(p.train_last < p.month)) {
            out.push_back({p.district, p.month, "training window", p.train_last});
        }
    }
    return out;
}

std::vector<double> series_maxima(const std::vector<std::vector<double>>& series) {
    std::vector<double> out;
    for (const auto& s : series) {
        double best = kNaN;
        for (double v : s) {
            if (std::isfinite(v) && !(v <= best)) best = v;
        }
        out.push_back(best);
    }
    return out;
}

std::vector<FactorAssociation> associate_cross_sections(
    const std::vector<std::string>& district_ids, const std::vector<std::string>& indicators,
    const std::vector<std::vector<double>>& indicator_values,
    const std::vector<std::string>& features,
    const std::vector<std::vector<double>>& feature_values) {
    if (district_ids.size() < 3) throw DataError("factor validation needs at least 3 districts");
    std::vector<FactorAssociation> out;
    for (std::size_t k = 0; k < indicators.size(); ++k) {
        FactorAssociation best;
        best.indicator = indicators[k];
        for (std::size_t f = 0; f < features.size(); ++f) {
            std::vector<double> a, b;
            std::vector<std::string> ids;
            for (std::size_t d = 0; d < district_ids.size(); ++d) {
                const double va = indicator_values[k][d];
                const double vb = feature_values[f][d];
                if (!std::isfinite(va) || !std::isfinite(vb)) continue;
                a.push_back(va);
                b.push_back(vb);
                ids.push_back(district_ids[d]);
            }
            if (a.size() < 3 || tsstats::is_constant(a) || tsstats::is_constant(b)) continue;
            const double r = tsstats::spearman(a, b);
            if (best.feature.empty() || r > best.spearman) {
                best.feature = features[f];
                best.spearman = r;
                best.district_ids = std::move(ids);
                best.indicator_percentiles = tsstats::percentile_ranks(a);
                best.feature_percentiles = tsstats::percentile_ranks(b);
            }
        }
        out.push_back(std::move(best));
    }
    return out;
}

std::vector<FactorAssociation> validate_factors(const PanelDataset& panel) {
    std::vector<std::string> ids;
    for (const auto& d : panel.districts) ids.push_back(d.id);
    std::vector<std::vector<double>> ind, feat;
    for (const auto& s : panel.indicators) ind.push_back(series_maxima(s));
    std::vector<std::string> features;
    for (const auto& b : panel.news) {
        features.push_back(b.feature);
        feat.push_back(series_maxima(b.district));
    }
    return associate_cross_sections(ids, panel.indicator_names, ind, features, feat);
}

void write_model_json(const std::filesystem::path& path, const FitResult& fit,
                      const CVReport* report) {
    nlohmann::ordered_json j;
    auto& spec = j["spec"];
    spec["kind"] = std::string(to_string(fit.spec.kind));
    spec["spatial"] = fit.spec.spatial;
    spec["ablated_clusters"] = fit.spec.ablated_clusters;
    spec["ablated_features"] = fit.spec.ablated_features;
    if (fit.spec.lasso_lambda) {
        spec["regularization"] = {{"lasso", *fit.spec.lasso_lambda}};
    } else {
        spec["regularization"] = "none";
    }
    spec["y_lags"] = fit.spec.y_lags;
    spec["y_lag_step"] = fit.spec.y_lag_step;
    spec["factor_lags"] = fit.spec.factor_lags;
    spec["publication_delay"] = fit.spec.publication_delay;
    spec["country_slopes"] = fit.spec.country_slopes;
    auto coef = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < fit.layout.size(); ++c) {
        if (fit.active[c]) coef[fit.layout.columns[c].name] = fit.coefficients[c];
    }
    j["coefficients"] = std::move(coef);
    auto dropped = nlohmann::ordered_json::array();
    for (const auto& d : fit.dropped) {
        dropped.push_back({{"column", fit.layout.columns[d.column].name}, {"reason", d.reason}});
    }
    j["dropped"] = std::move(dropped);
    j["nobs"] = fit.nobs;
    j["rss"] = fit.rss;
    if (report) {
        auto folds = nlohmann::ordered_json::array();
        for (const auto& f : report->folds) {
            nlohmann::ordered_json fj{{"fold", f.fold},
                                      {"test_first", f.test_first.str()},
                                      {"test_last", f.test_last.str()},
                                      {"train_rows", f.train_rows},
                                      {"test_rows", f.test_rows}};
            fj["rmse"] = std::isfinite(f.rmse) ? nlohmann::ordered_json(f.rmse) : nullptr;
            if (!f.warning.empty()) fj["warning"] = f.warning;
            folds.push_back(std::move(fj));
        }
        j["fold_rmse"] = std::move(folds);
        j["mean_rmse"] = std::isfinite(report->mean_rmse) ? nlohmann::ordered_json(report->mean_rmse)
                                                          : nullptr;
        j["country_rmse"] = report->country_rmse;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<PredictionRecord>& records) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"district_id", "month", "y_true", "y_pred", "model"});
    for (const auto& r : records) {
        w.field(r.district_id).field(r.month.str()).field(r.y_true).field(r.y_pred).field(r.model);
        w.end_row();
    }
}

std::vector<PredictionRecord> read_predictions_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto cd = table.column("district_id");
    const auto cm = table.column("month");
    const auto ct = table.column("y_true");
    const auto cp = table.column("y_pred");
    const auto ck = table.column("model");
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        try {
            out.push_back({row[cd], Month::parse(row[cm]), std::stod(row[ct]), std::stod(row[cp]),
                           row[ck]});
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[i]) +
                            ": malformed prediction row");
        }
    }
    return out;
}

std::vector<PredictionRecord> prediction_records(const PanelDataset& panel,
                                                 const CVReport& report,
                                                 const std::string& model) {
    std::vector<PredictionRecord> out;
    out.reserve(report.predictions.size());
    for (const auto& p : report.predictions) {
        out.push_back({panel.districts[p.district].id, p.month, p.y_true, p.y_pred, model});
    }
    return out;
}

}  // namespace fewscast::panel
