#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fewscast/common/error.hpp"

namespace fewscast::tsstats {

/// Supported test sizes for the constant-only Dickey-Fuller regression.
enum class AdfLevel { OnePercent, FivePercent, TenPercent };

AdfLevel parse_adf_level(double level);

/// MacKinnon (2010) response-surface critical value for the regression with a
/// constant and no trend, at `nobs` regression observations.
double adf_critical_value(AdfLevel level, std::size_t nobs);

/// floor(12 * (T / 100)^(1/4)).
std::size_t schwert_max_lag(std::size_t length);

struct AdfResult {
    double statistic = 0.0;  ///< t-ratio on the lagged level
    double critical_value = 0.0;
    std::size_t lags = 0;  ///< augmentation lags chosen by AIC
    std::size_t nobs = 0;
    bool stationary = false;  ///< statistic < critical_value
};

/// Regresses dy_t on a constant, y_{t-1} and p lagged differences, choosing
/// p in [0, max_lag] by AIC on a common sample, then refitting on the full
/// sample for that p. Needs length >= 12 + max_lag. A constant series is a
/// DataError ("degenerate series").
AdfResult adf_test(std::span<const double> series, std::size_t max_lag,
                   AdfLevel level = AdfLevel::FivePercent);

/// The differenced series could not be made stationary within max_d differences.
class NonStationaryError : public NumericalError {
public:
    NonStationaryError(const std::string& what, double statistic)
        : NumericalError(what), statistic_(statistic) {}
    [[nodiscard]] double statistic() const { return statistic_; }

private:
    double statistic_;
};

struct Differenced {
    std::vector<double> values;  ///< shorter than the input by `order`
    int order = 0;
    double statistic = 0.0;
};

std::vector<double> difference(std::span<const double> values);

/// Smallest d <= max_d for which the d-times differenced series passes adf_test.
/// The lag cap shrinks with the series so the length precondition keeps holding.
Differenced difference_until_stationary(std::span<const double> series, int max_d,
                                        std::size_t max_lag,
                                        AdfLevel level = AdfLevel::FivePercent);

}  // namespace fewscast::tsstats
