#include "fewscast/panel/model.hpp"

#include <algorithm>
#include <cmath>

#include "fewscast/common/error.hpp"
#include "fewscast/tsstats/ols.hpp"

namespace fewscast::panel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lag_suffix(int lag) { return "[t-" + std::to_string(lag) + "]"; }

bool is_constant_column(const Eigen::MatrixXd& X, Eigen::Index j) {
    if (X.rows() == 0) return true;
    const double first = X(0, j);
    for (Eigen::Index i = 1; i < X.rows(); ++i) {
        if (X(i, j) != first) return false;
    }
    return true;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

Eigen::VectorXd column_std(const Eigen::MatrixXd& X) {
    const double n = static_cast<double>(X.rows());
    Eigen::VectorXd s(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double mean = X.col(j).sum() / n;
        s[j] = std::sqrt((X.col(j).array() - mean).square().sum() / n);
    }
    return s;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Baseline: return "baseline";
        case ModelKind::News: return "news";
        case ModelKind::Combined: return "combined";
    }
    return "combined";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "baseline") return ModelKind::Baseline;
    if (text == "news") return ModelKind::News;
    if (text == "combined") return ModelKind::Combined;
    throw ConfigError("unknown model kind '" + std::string(text) + "'");
}

int ModelSpec::lag_reach() const {
    int reach = y_lag_step * static_cast<int>(y_lags);
    if (factor_lags > 0) reach = std::max(reach, publication_delay + static_cast<int>(factor_lags));
    return reach;
}

int ModelSpec::min_lag() const {
    int lag = std::numeric_limits<int>::max();
    if (y_lags > 0) lag = y_lag_step;
    if (factor_lags > 0) lag = std::min(lag, publication_delay + 1);
    return lag == std::numeric_limits<int>::max() ? 0 : lag;
}

std::optional<std::size_t> DesignLayout::find(std::string_view name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].name == name) return j;
    }
    return std::nullopt;
}

DesignLayout make_layout(const PanelDataset& panel, const ModelSpec& spec) {
    if (spec.y_lag_step < 1 || spec.publication_delay < 0) {
        throw ConfigError("lag step must be positive and publication delay non-negative");
    }
    if (spec.lasso_lambda && !(*spec.lasso_lambda >= 0.0)) {
        throw ConfigError("lasso lambda must be non-negative");
    }
    for (const auto& f : spec.ablated_features) (void)panel.news_block(f);

    DesignLayout layout;
    for (std::size_t d = 0; d < panel.districts.size(); ++d) {
        Column c;
        c.name = "a[" + panel.districts[d].id + "]";
        c.role = ColumnRole::Intercept;
        c.source = panel.districts[d].id;
        c.district = d;
        layout.columns.push_back(c);
    }
    layout.intercepts = layout.columns.size();

    std::vector<Column> slopes;
    const auto add_block = [&](bool spatial) {
        const std::string pre = spatial ? "~" : "";
        for (std::size_t m = 1; m <= spec.y_lags; ++m) {
            Column c;
            c.role = ColumnRole::YLag;
            c.source = "y";
            c.lag = spec.y_lag_step * static_cast<int>(m);
            c.spatial = spatial;
            c.name = pre + "y" + lag_suffix(c.lag);
            slopes.push_back(c);
        }
        if (spec.uses_traditional()) {
            for (std::size_t k = 0; k < panel.indicator_names.size(); ++k) {
                for (std::size_t n = 1; n <= spec.factor_lags; ++n) {
                    Column c;
                    c.role = ColumnRole::Traditional;
                    c.source = panel.indicator_names[k];
                    c.index = k;
                    c.lag = spec.publication_delay + static_cast<int>(n);
                    c.spatial = spatial;
                    c.name = pre + c.source + lag_suffix(c.lag);
                    slopes.push_back(c);
                }
            }
            for (std::size_t l = 0; l < corpus::kStaticFactorCount; ++l) {
                Column c;
                c.role = ColumnRole::Static;
                c.source = std::string(corpus::kStaticFactorNames[l]);
                c.index = l;
                c.spatial = spatial;
                c.name = pre + c.source;
                slopes.push_back(c);
            }
        }
        if (spec.uses_news()) {
            for (std::size_t f = 0; f < panel.news.size(); ++f) {
                const auto& feature = panel.news[f].feature;
                if (spec.ablated_features.contains(feature)) continue;
                const auto levels = spatial ? std::vector<corpus::Level>{corpus::Level::District}
                                            : std::vector<corpus::Level>{corpus::Level::District,
                                                                         corpus::Level::Province,
                                                                         corpus::Level::Country};
                for (auto level : levels) {
                    for (std::size_t n = 1; n <= spec.factor_lags; ++n) {
                        Column c;
                        c.role = ColumnRole::News;
                        c.source = feature;
                        c.index = f;
                        c.level = level;
                        c.lag = spec.publication_delay + static_cast<int>(n);
                        c.spatial = spatial;
                        c.name = pre + feature + "@" + std::string(corpus::to_string(level)) +
                                 lag_suffix(c.lag);
                        slopes.push_back(c);
                    }
                }
            }
        }
    };
    add_block(false);
    if (spec.spatial) add_block(true);

    for (const auto& c : slopes) {
        if (!spec.country_slopes) {
            layout.columns.push_back(c);
            continue;
        }
        for (std::size_t i = 0; i < panel.countries.size(); ++i) {
            Column cc = c;
            cc.country = static_cast<int>(i);
            cc.name += "#" + panel.countries[i];
            layout.columns.push_back(cc);
        }
    }
    return layout;
}

DesignBuilder::DesignBuilder(const PanelDataset& panel, const ModelSpec& spec)
    : panel_(panel), spec_(spec), layout_(make_layout(panel, spec)) {
    if (!spec.spatial) return;
    const std::size_t D = panel.districts.size();
    for (std::size_t d = 0; d < D; ++d) spatial_y_.push_back(spatial_average(panel, d, panel.ipc));
    if (spec.uses_traditional()) {
        for (const auto& ind : panel.indicators) {
            std::vector<std::vector<double>> per;
            for (std::size_t d = 0; d < D; ++d) per.push_back(spatial_average(panel, d, ind));
            spatial_indicators_.push_back(std::move(per));
        }
        for (std::size_t d = 0; d < D; ++d) {
            std::array<double, corpus::kStaticFactorCount> avg{};
            for (auto j : nearest_neighbors(panel.districts, d)) {
                for (std::size_t l = 0; l < avg.size(); ++l) {
                    avg[l] += panel.districts[j].statics[l] / 4.0;
                }
            }
            spatial_statics_.push_back(avg);
        }
    }
    if (spec.uses_news()) {
        for (const auto& block : panel.news) {
            std::vector<std::vector<double>> per;
            if (!spec.ablated_features.contains(block.feature)) {
                for (std::size_t d = 0; d < D; ++d) per.push_back(spatial_average(panel, d, block.district));
            }
            spatial_news_.push_back(std::move(per));
        }
    }
}

const std::vector<double>& DesignBuilder::series(const Column& c, std::size_t d) const {
    switch (c.role) {
        case ColumnRole::YLag: return c.spatial ? spatial_y_[d] : panel_.ipc[d];
        case ColumnRole::Traditional:
            return c.spatial ? spatial_indicators_[c.index][d] : panel_.indicators[c.index][d];
        case ColumnRole::News: {
            if (c.spatial) return spatial_news_[c.index][d];
            const auto& block = panel_.news[c.index];
            switch (c.level) {
                case corpus::Level::District: return block.district[d];
                case corpus::Level::Province: return block.province[panel_.province_of[d]];
                case corpus::Level::Country: return block.country[panel_.country_of[d]];
            }
            break;
        }
        default: break;
    }
    throw std::logic_error("column has no series");
}

double DesignBuilder::value(const Column& c, std::size_t d, Month t) const {
    double v = kNaN;
    switch (c.role) {
        case ColumnRole::Intercept: return c.district == d ? 1.0 : 0.0;
        case ColumnRole::Static:
            v = c.spatial ? spatial_statics_[d][c.index] : panel_.districts[d].statics[c.index];
            break;
        default: {
            const int idx = (t - c.lag) - panel_.first;
            if (idx < 0 || idx >= static_cast<int>(panel_.months)) return kNaN;
            v = series(c, d)[static_cast<std::size_t>(idx)];
        }
    }
    if (c.country >= 0 && std::isfinite(v) &&
        panel_.country_of[d] != static_cast<std::size_t>(c.country)) {
        return 0.0;
    }
    return v;
}

std::optional<std::vector<double>> DesignBuilder::row(std::size_t d, Month t,
                                                      std::string* missing) const {
    std::vector<double> out(layout_.size());
    for (std::size_t j = 0; j < layout_.size(); ++j) {
        out[j] = value(layout_.columns[j], d, t);
        if (!std::isfinite(out[j])) {
            if (missing) *missing = layout_.columns[j].name;
            return std::nullopt;
        }
    }
    return out;
}

Design DesignBuilder::build(Month first, Month last) const {
    Design design;
    design.layout = layout_;
    first = std::max(first, panel_.first);
    last = std::min(last, panel_.last());
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (Month t = first; t <= last; ++t) {
        const auto ti = panel_.month_index(t);
        for (std::size_t d = 0; d < panel_.districts.size(); ++d) {
            const double y = panel_.ipc[d][ti];
            if (!std::isfinite(y)) {
                design.skipped.push_back({d, t, "y"});
                continue;
            }
            std::string missing;
            auto r = row(d, t, &missing);
            if (!r) {
                design.skipped.push_back({d, t, missing});
                continue;
            }
            int min_lag = std::numeric_limits<int>::max();
            for (const auto& c : layout_.columns) {
                if (c.dated()) min_lag = std::min(min_lag, c.lag);
            }
            if (min_lag == std::numeric_limits<int>::max()) min_lag = spec_.min_lag();
            design.rows.push_back({d, t, t - min_lag});
            rows.push_back(std::move(*r));
            ys.push_back(y);
        }
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(layout_.size());
    design.X.resize(n, k);
    design.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) design.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        design.y[i] = ys[static_cast<std::size_t>(i)];
    }
    return design;
}

Design build_design(const PanelDataset& panel, const ModelSpec& spec, Month first, Month last) {
    return DesignBuilder(panel, spec).build(first, last);
}

LassoResult lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                  const std::vector<bool>& penalized, double tolerance, std::size_t max_sweeps) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (n == 0) throw DataError("lasso: no rows");
    if (y.size() != n || static_cast<Eigen::Index>(penalized.size()) != p) {
        throw DataError("lasso: dimension mismatch");
    }
    if (!(lambda >= 0.0)) throw ConfigError("lasso lambda must be non-negative");
    const double nn = static_cast<double>(n);
    const Eigen::VectorXd s = column_std(X);
    Eigen::VectorXd col_sq(p);
    for (Eigen::Index j = 0; j < p; ++j) col_sq[j] = X.col(j).squaredNorm() / nn;

    LassoResult out;
    out.beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd r = y;
    for (out.sweeps = 1; out.sweeps <= max_sweeps; ++out.sweeps) {
        double max_delta = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (col_sq[j] == 0.0) continue;
            const bool pen = penalized[static_cast<std::size_t>(j)];
            const double rho = X.col(j).dot(r) / nn + col_sq[j] * out.beta[j];
            const double next = (pen ? soft_threshold(rho, lambda * s[j]) : rho) / col_sq[j];
            const double delta = next - out.beta[j];
            if (delta != 0.0) {
                r.noalias() -= delta * X.col(j);
                out.beta[j] = next;
            }
            const double scale = pen && s[j] > 0.0 ? s[j] : std::sqrt(col_sq[j]);
            max_delta = std::max(max_delta, std::abs(delta) * scale);
        }
        if (max_delta < tolerance) {
            out.kkt_residual = lasso_kkt_residual(X, y, out.beta, lambda, penalized);
            return out;
        }
    }
    throw NumericalError("lasso did not converge within " + std::to_string(max_sweeps) +
                         " sweeps");
}

double lasso_kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double lambda,
                          const std::vector<bool>& penalized) {
    const Eigen::VectorXd g = X.transpose() * (y - X * beta) / static_cast<double>(X.rows());
    const Eigen::VectorXd s = column_std(X);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double v = std::abs(g[j]);
        if (penalized[static_cast<std::size_t>(j)]) {
            const double w = lambda * s[j];
            if (beta[j] > 0.0) {
                v = std::abs(g[j] - w);
            } else if (beta[j] < 0.0) {
                v = std::abs(g[j] + w);
            } else {
                v = std::max(0.0, std::abs(g[j]) - w);
            }
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double FitResult::predict(std::span<const double> row, std::size_t district) const {
    double out = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
        if (active[j]) out += coefficients[j] * row[j];
    }
    if (district < layout.intercepts && !active[district]) out += fallback_intercept;
    return out;
}

FitResult fit_design(const Design& design, const ModelSpec& spec) {
    const auto& layout = design.layout;
    const std::size_t k = layout.size();
    if (design.X.rows() == 0) throw DataError("no design rows in the training window");

    FitResult result;
    result.spec = spec;
    result.layout = layout;
    result.coefficients.assign(k, 0.0);
    result.active.assign(k, true);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& c = layout.columns[j];
        const auto jj = static_cast<Eigen::Index>(j);
        std::string reason;
        if (c.role == ColumnRole::Static) {
            reason = "absorbed by district intercepts";
        } else if (c.role == ColumnRole::Intercept) {
            if (design.X.col(jj).sum() == 0.0) reason = "no training rows";
        } else if (is_constant_column(design.X, jj)) {
            reason = "constant in training window";
        }
        if (!reason.empty()) {
            result.active[j] = false;
            result.dropped.push_back({j, reason});
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < k; ++j) {
        if (result.active[j]) keep.push_back(j);
    }
    Eigen::MatrixXd Xa(design.X.rows(), static_cast<Eigen::Index>(keep.size()));
    std::vector<bool> penalized;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        Xa.col(static_cast<Eigen::Index>(i)) = design.X.col(static_cast<Eigen::Index>(keep[i]));
        penalized.push_back(layout.columns[keep[i]].role != ColumnRole::Intercept);
    }

    Eigen::VectorXd beta;
    if (spec.lasso_lambda) {
        auto l = lasso(Xa, design.y, *spec.lasso_lambda, penalized, spec.lasso_tolerance,
                       spec.lasso_max_sweeps);
        beta = std::move(l.beta);
        result.kkt_residual = l.kkt_residual;
        result.sweeps = l.sweeps;
    } else {
        try {
            beta = tsstats::ols(Xa, design.y, false).beta;
        } catch (const tsstats::RankDeficientError& e) {
            std::string names;
            for (auto j : e.columns()) {
                names += (names.empty() ? "" : ", ") + layout.columns[keep[j]].name;
            }
            throw NumericalError("rank-deficient panel design, collinear columns: " + names);
        }
    }
    double intercept_sum = 0.0;
    std::size_t intercept_count = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        result.coefficients[keep[i]] = beta[static_cast<Eigen::Index>(i)];
        if (keep[i] < layout.intercepts) {
            intercept_sum += beta[static_cast<Eigen::Index>(i)];
            ++intercept_count;
        }
    }
    result.fallback_intercept =
        intercept_count ? intercept_sum / static_cast<double>(intercept_count) : 0.0;
    result.nobs = static_cast<std::size_t>(design.X.rows());
    result.rss = (design.y - Xa * beta).squaredNorm();
    return result;
}

FitResult fit(const PanelDataset& panel, const ModelSpec& spec, Month train_first,
              Month train_last) {
    return fit_design(build_design(panel, spec, train_first, train_last), spec);
}

}  // namespace fewscast::panel
