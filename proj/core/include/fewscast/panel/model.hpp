#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fewscast/panel/dataset.hpp"

namespace fewscast::panel {

enum class ModelKind { Baseline, News, Combined };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelSpec {
    ModelKind kind = ModelKind::Combined;
    bool spatial = false;
    std::set<int> ablated_clusters;           ///< recorded for reporting
    std::set<std::string> ablated_features;   ///< columns actually removed
    std::optional<double> lasso_lambda;

    std::size_t y_lags = 6;       ///< M
    int y_lag_step = 3;           ///< y at t - step * m
    std::size_t factor_lags = 6;  ///< N
    int publication_delay = 2;    ///< factors at t - delay - n

    bool country_slopes = false;

    double lasso_tolerance = 1e-7;
    std::size_t lasso_max_sweeps = 100000;

    [[nodiscard]] bool uses_traditional() const { return kind != ModelKind::News; }
    [[nodiscard]] bool uses_news() const { return kind != ModelKind::Baseline; }
    /// Months back from t to the oldest regressor.
    [[nodiscard]] int lag_reach() const;
    /// Months back from t to the most recent regressor.
    [[nodiscard]] int min_lag() const;
};

enum class ColumnRole { Intercept, YLag, Traditional, Static, News };

struct Column {
    std::string name;
    ColumnRole role = ColumnRole::Intercept;
    std::string source;  ///< indicator, static factor or feature name; district id for intercepts
    std::size_t index = 0;  ///< position of `source` in the panel's indicator / static / news lists
    corpus::Level level = corpus::Level::District;
    int lag = 0;  ///< months before t; 0 for intercepts and statics
    bool spatial = false;
    int country = -1;  ///< country index for country-specific slopes, -1 when shared
    std::size_t district = std::numeric_limits<std::size_t>::max();  ///< intercept owner

    [[nodiscard]] bool dated() const {
        return role == ColumnRole::YLag || role == ColumnRole::Traditional ||
               role == ColumnRole::News;
    }
};

struct DesignLayout {
    std::vector<Column> columns;
    std::size_t intercepts = 0;  ///< the first `intercepts` columns are district dummies

    [[nodiscard]] std::size_t size() const { return columns.size(); }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
};

/// Column order: district intercepts, y lags, traditional lags, statics, news
/// lags (district, province, country per feature), then the spatial block in
/// the same order. Removing every news feature therefore yields exactly the
/// baseline layout.
DesignLayout make_layout(const PanelDataset& panel, const ModelSpec& spec);

struct DesignRow {
    std::size_t district = 0;
    Month month;
    Month latest_regressor;  ///< most recent month any dated regressor refers to
};

struct SkippedRow {
    std::size_t district = 0;
    Month month;
    std::string column;  ///< first column without a value ("y" for a missing target)
};

struct Design {
    DesignLayout layout;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<DesignRow> rows;
    std::vector<SkippedRow> skipped;
};

/// Produces design rows for a fixed panel and spec. Spatial averages are
/// computed once on construction.
class DesignBuilder {
public:
    DesignBuilder(const PanelDataset& panel, const ModelSpec& spec);

    [[nodiscard]] const DesignLayout& layout() const { return layout_; }

    /// Regressor values for district d at month t, or nullopt with the name of
    /// the first missing column in `missing`.
    std::optional<std::vector<double>> row(std::size_t d, Month t,
                                           std::string* missing = nullptr) const;

    /// Rows for every district and every target month in [first, last] whose
    /// target and regressors are all present.
    [[nodiscard]] Design build(Month first, Month last) const;

private:
    [[nodiscard]] double value(const Column& c, std::size_t d, Month t) const;
    [[nodiscard]] const std::vector<double>& series(const Column& c, std::size_t d) const;

    const PanelDataset& panel_;
    ModelSpec spec_;
    DesignLayout layout_;
    std::vector<std::vector<double>> spatial_y_;
    std::vector<std::vector<std::vector<double>>> spatial_indicators_;  ///< [k][d][t]
    std::vector<std::array<double, corpus::kStaticFactorCount>> spatial_statics_;
    std::vector<std::vector<std::vector<double>>> spatial_news_;  ///< [feature][d][t]
};

Design build_design(const PanelDataset& panel, const ModelSpec& spec, Month first, Month last);

struct LassoResult {
    Eigen::VectorXd beta;
    double kkt_residual = 0.0;
    std::size_t sweeps = 0;
};

/// Minimizes (1/2n)|y - X b|^2 + lambda * sum_j s_j |b_j| over penalized j,
/// with s_j the column's standard deviation (equivalently, the plain lasso on
/// standardized columns). Cyclic coordinate descent until no coefficient moves
/// by more than `tolerance` on the standardized scale.
LassoResult lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                  const std::vector<bool>& penalized, double tolerance = 1e-7,
                  std::size_t max_sweeps = 100000);

/// Largest violation of the lasso subgradient optimality conditions.
double lasso_kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double lambda,
                          const std::vector<bool>& penalized);

struct DroppedColumn {
    std::size_t column = 0;
    std::string reason;
};

struct FitResult {
    ModelSpec spec;
    DesignLayout layout;
    std::vector<double> coefficients;  ///< one per layout column, 0 where dropped
    std::vector<bool> active;
    std::vector<DroppedColumn> dropped;
    double fallback_intercept = 0.0;  ///< mean fitted intercept, for districts unseen in training
    std::size_t nobs = 0;
    double rss = 0.0;
    double kkt_residual = 0.0;
    std::size_t sweeps = 0;

    [[nodiscard]] double predict(std::span<const double> row, std::size_t district) const;
};

/// Fits on the given design rows. Static columns are absorbed by the district
/// intercepts and dropped, as are columns constant over the training rows and
/// intercepts of districts without rows.
FitResult fit_design(const Design& design, const ModelSpec& spec);

/// Fits on target months [train_first, train_last].
FitResult fit(const PanelDataset& panel, const ModelSpec& spec, Month train_first,
              Month train_last);

}  // namespace fewscast::panel
