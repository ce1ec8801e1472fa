#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fewscast/panel/model.hpp"
#include "fewscast/semantics/clustering.hpp"

namespace fewscast::panel {

struct FoldResult {
    std::size_t fold = 0;  ///< 1-based
    Month test_first;
    Month test_last;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    double rmse = std::numeric_limits<double>::quiet_NaN();  ///< NaN when the fold was excluded
    std::string warning;
};

struct Prediction {
    std::size_t district = 0;
    Month month;
    double y_true = 0.0;
    double y_pred = 0.0;
    std::size_t fold = 0;
    Month train_last;        ///< last target month of the training window
    Month latest_regressor;  ///< most recent month any regressor refers to
};

struct CVReport {
    ModelSpec spec;
    std::vector<FoldResult> folds;
    double mean_rmse = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> country_rmse;  ///< mean over folds of each country's fold RMSE
    std::vector<Prediction> predictions;
    std::vector<std::string> warnings;

    /// RMSE over all predictions of each district, NaN for districts without any.
    [[nodiscard]] std::vector<double> district_rmse(std::size_t districts) const;
};

/// Target months that can carry a full set of lags: [first + lag_reach, last].
std::pair<Month, Month> modeling_range(const PanelDataset& panel, const ModelSpec& spec);

/// Splits the modeling range into `folds` consecutive blocks of equal length,
/// the remainder going to the last block.
std::vector<std::pair<Month, Month>> make_folds(Month first, Month last, std::size_t folds);

/// Expanding-window cross-validation: fold i >= 2 is predicted by a model
/// trained on folds 1..i-1.
CVReport cross_validate(const PanelDataset& panel, const ModelSpec& spec, std::size_t folds = 10);

struct AblationResult {
    int cluster_id = 0;
    std::string label;
    std::vector<std::string> features;
    double mean_rmse = 0.0;
    double delta = 0.0;                  ///< mean RMSE increase over the reference
    std::vector<double> district_delta;  ///< per-district RMSE increase
};

/// Removes the given clusters' features from the spec's news block.
ModelSpec without_clusters(const ModelSpec& spec,
                           const std::vector<semantics::FeatureCluster>& clusters,
                           const std::set<int>& cluster_ids);

/// Refits the model once per cluster with that cluster's columns removed.
std::vector<AblationResult> ablate(const PanelDataset& panel, const ModelSpec& spec,
                                   const std::vector<semantics::FeatureCluster>& clusters,
                                   const CVReport& reference, std::size_t folds = 10);

struct LookAheadViolation {
    std::size_t district = 0;
    Month month;
    std::string column;
    Month regressor_month;
};

/// Checks every prediction against the layout's column dates: each dated
/// regressor must refer to a month <= t - horizon, and the prediction month
/// must lie after its training window.
std::vector<LookAheadViolation> audit_look_ahead(const DesignLayout& layout,
                                                 const std::vector<Prediction>& predictions,
                                                 int horizon = 3);

struct FactorAssociation {
    std::string indicator;
    std::string feature;  ///< empty when no news factor could be compared
    double spearman = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> district_ids;  ///< districts entering the comparison
    std::vector<double> indicator_percentiles;
    std::vector<double> feature_percentiles;
};

/// Maximum finite value of each series, NaN for all-missing series.
std::vector<double> series_maxima(const std::vector<std::vector<double>>& series);

/// For each indicator cross-section, the feature cross-section with the highest
/// Spearman correlation. Districts with a missing value on either side are
/// left out of that pair; constant cross-sections are skipped.
std::vector<FactorAssociation> associate_cross_sections(
    const std::vector<std::string>& district_ids, const std::vector<std::string>& indicators,
    const std::vector<std::vector<double>>& indicator_values,
    const std::vector<std::string>& features,
    const std::vector<std::vector<double>>& feature_values);

/// District maxima of every traditional indicator against the district-level
/// news factors.
std::vector<FactorAssociation> validate_factors(const PanelDataset& panel);

void write_model_json(const std::filesystem::path& path, const FitResult& fit,
                      const CVReport* report = nullptr);

struct PredictionRecord {
    std::string district_id;
    Month month;
    double y_true = 0.0;
    double y_pred = 0.0;
    std::string model;
};

/// CSV: district_id,month,y_true,y_pred,model
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> read_predictions_csv(const std::filesystem::path& path);

std::vector<PredictionRecord> prediction_records(const PanelDataset& panel,
                                                 const CVReport& report,
                                                 const std::string& model);

}  // namespace fewscast::panel
