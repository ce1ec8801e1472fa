#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fewscast/tsstats/adf.hpp"
#include "fewscast/tsstats/granger.hpp"

namespace fewscast::tsstats {

enum class ScreeningMode {
    Pooled,       ///< stacked districts with district intercepts
    PerDistrict,  ///< one test per district, Bonferroni across districts
};

struct ScreeningOptions {
    ScreeningMode mode = ScreeningMode::Pooled;
    std::size_t max_lags = 6;  ///< AIC search range for the ADL lag order
    double level = 0.01;       ///< Granger significance level
    AdfLevel adf_level = AdfLevel::FivePercent;
    std::size_t adf_max_lag = 4;
    int max_differences = 2;
};

struct ScreeningResult {
    std::string feature;
    double f = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;
    int differencing_order = 0;
    bool retained = false;
    std::string reason;  ///< why a feature was rejected without a test
};

/// Screens one feature. `y` and `x` hold one aligned monthly series per
/// district; NaN marks months without a value (e.g. before the first IPC report).
ScreeningResult screen_feature(const std::string& feature,
                               const std::vector<std::vector<double>>& y,
                               const std::vector<std::vector<double>>& x,
                               const ScreeningOptions& options = {});

/// Screens every feature; `factor_of(feature)` supplies its district series.
std::vector<ScreeningResult> select_features(
    const std::vector<std::string>& features, const std::vector<std::vector<double>>& y,
    const std::function<std::vector<std::vector<double>>(const std::string&)>& factor_of,
    const ScreeningOptions& options = {});

/// Differencing order shared across districts: the smallest d at which a
/// majority of the non-constant district series pass the ADF test.
int common_differencing_order(const std::vector<std::vector<double>>& x,
                              const ScreeningOptions& options);

/// CSV: feature,F,p,lag_n,differencing_d,decision
void write_screening_csv(const std::filesystem::path& path,
                         const std::vector<ScreeningResult>& results);
std::vector<ScreeningResult> read_screening_csv(const std::filesystem::path& path);

}  // namespace fewscast::tsstats
