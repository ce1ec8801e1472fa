#include "fewscast/tsstats/adf.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "fewscast/tsstats/correlation.hpp"
#include "fewscast/tsstats/ols.hpp"

namespace fewscast::tsstats {

AdfLevel parse_adf_level(double level) {
    if (level == 0.01) return AdfLevel::OnePercent;
    if (level == 0.05) return AdfLevel::FivePercent;
    if (level == 0.10 || level == 0.1) return AdfLevel::TenPercent;
    throw ConfigError("ADF level must be one of 0.01, 0.05, 0.10");
}

double adf_critical_value(AdfLevel level, std::size_t nobs) {
    // Constant-only ("c") response surface: cv = b0 + b1/T + b2/T^2 + b3/T^3.
    static constexpr double kTau[3][4] = {
        {-3.43035, -6.5393, -16.786, -79.433},
        {-2.86154, -2.8903, -4.234, -40.040},
        {-2.56677, -1.5384, -2.809, 0.0},
    };
    const auto& b = kTau[static_cast<int>(level)];
    const double inv = 1.0 / static_cast<double>(nobs);
    return b[0] + b[1] * inv + b[2] * inv * inv + b[3] * inv * inv * inv;
}

std::size_t schwert_max_lag(std::size_t length) {
    return static_cast<std::size_t>(
        std::floor(12.0 * std::pow(static_cast<double>(length) / 100.0, 0.25)));
}

namespace {

struct DfRegression {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

// Rows t = start .. T-1 of dy_t = c + g*y_{t-1} + sum_i d_i*dy_{t-i}.
DfRegression build(std::span<const double> s, std::size_t lags, std::size_t start) {
    const std::size_t T = s.size();
    const auto rows = static_cast<Eigen::Index>(T - start);
    DfRegression r{Eigen::MatrixXd(rows, static_cast<Eigen::Index>(lags + 2)),
                   Eigen::VectorXd(rows)};
    for (std::size_t t = start; t < T; ++t) {
        const auto row = static_cast<Eigen::Index>(t - start);
        r.y[row] = s[t] - s[t - 1];
        r.X(row, 0) = 1.0;
        r.X(row, 1) = s[t - 1];
        for (std::size_t i = 1; i <= lags; ++i) {
            r.X(row, static_cast<Eigen::Index>(i + 1)) = s[t - i] - s[t - i - 1];
        }
    }
    return r;
}

}  // namespace

AdfResult adf_test(std::span<const double> series, std::size_t max_lag, AdfLevel level) {
    const std::size_t T = series.size();
    if (T < 12 + max_lag) {
        throw DataError("ADF needs at least " + std::to_string(12 + max_lag) +
                        " observations, got " + std::to_string(T));
    }
    if (is_constant(series)) throw DataError("degenerate series");

    std::optional<std::size_t> best;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= max_lag; ++p) {
        const auto reg = build(series, p, max_lag + 1);
        try {
            const auto fit = ols(reg.X, reg.y, false);
            const double n = static_cast<double>(fit.nobs);
            if (fit.rss <= 0.0) continue;
            const double aic = n * std::log(fit.rss / n) + 2.0 * static_cast<double>(p + 2);
            if (aic < best_aic) {
                best_aic = aic;
                best = p;
            }
        } catch (const NumericalError&) {
            continue;
        }
    }
    if (!best) throw DataError("degenerate series");

    const auto reg = build(series, *best, *best + 1);
    const auto fit = ols(reg.X, reg.y, true);
    const double se = std::sqrt(fit.covariance(1, 1));
    if (!(se > 0.0) || !std::isfinite(se)) throw DataError("degenerate series");

    AdfResult out;
    out.statistic = fit.beta[1] / se;
    out.lags = *best;
    out.nobs = fit.nobs;
    out.critical_value = adf_critical_value(level, out.nobs);
    out.stationary = out.statistic < out.critical_value;
    return out;
}

std::vector<double> difference(std::span<const double> values) {
    std::vector<double> out;
    if (values.size() < 2) return out;
    out.reserve(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) out.push_back(values[i] - values[i - 1]);
    return out;
}

Differenced difference_until_stationary(std::span<const double> series, int max_d,
                                        std::size_t max_lag, AdfLevel level) {
    if (max_d < 0) throw ConfigError("max_d must be non-negative");
    std::vector<double> current(series.begin(), series.end());
    double statistic = 0.0;
    for (int d = 0; d <= max_d; ++d) {
        if (current.size() < 12) {
            throw DataError("series too short for ADF after " + std::to_string(d) +
                            " differences");
        }
        const std::size_t lag_cap = std::min(max_lag, current.size() - 12);
        const auto res = adf_test(current, lag_cap, level);
        statistic = res.statistic;
        if (res.stationary) return {std::move(current), d, statistic};
        if (d < max_d) current = difference(current);
    }
    throw NonStationaryError("series still non-stationary after " + std::to_string(max_d) +
                                 " differences (ADF statistic " + std::to_string(statistic) + ")",
                             statistic);
}

}  // namespace fewscast::tsstats
