#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fewscast::tsstats {

/// Upper tail of the F distribution, via the regularized incomplete beta function.
double f_survival(double f, double df1, double df2);

/// y_t on a constant, y_{t-1..t-n} and x_{t-1..t-n}.
struct AdlFit {
    std::size_t lags = 0;
    std::vector<double> coefficients;  ///< group intercepts, then a_1..a_n, then b_1..b_n
    double rss = 0.0;
    std::size_t nobs = 0;
    std::size_t params = 0;
    double aic = 0.0;  ///< nobs * ln(rss / nobs) + 2 * params
};

struct LagSelection {
    std::size_t lags = 0;
    std::vector<AdlFit> candidates;  ///< n = 1..n_max, all on the n_max-aligned sample
};

struct GrangerResult {
    double f = 0.0;
    std::size_t df1 = 0;
    std::size_t df2 = 0;
    double p_value = 1.0;
    bool causal = false;  ///< p_value < level
    std::size_t lags = 0;
    int differencing_order = 0;  ///< applied to x before testing (informational)
    std::size_t nobs = 0;
};

/// One series pair per group (district). Each group is scanned for usable
/// rows independently; NaN marks a missing month. With a single group this is
/// the ordinary time-series regression with one constant.
struct PanelPairs {
    std::vector<std::span<const double>> y;
    std::vector<std::span<const double>> x;

    void add(std::span<const double> y_group, std::span<const double> x_group) {
        y.push_back(y_group);
        x.push_back(x_group);
    }
};

/// Fits the ADL regression for n = 1..n_max on the common sample aligned to
/// n_max and returns the AIC minimizer. Collinear candidates get an infinite AIC.
LagSelection select_lags_aic(const PanelPairs& data, std::size_t n_max);
LagSelection select_lags_aic(std::span<const double> y, std::span<const double> x,
                             std::size_t n_max);

/// F-test of b_1 = ... = b_n = 0 in the ADL regression with n lags.
GrangerResult granger_test(const PanelPairs& data, std::size_t lags, double level = 0.01);
GrangerResult granger_test(std::span<const double> y, std::span<const double> x,
                           std::size_t lags, double level = 0.01);

}  // namespace fewscast::tsstats
