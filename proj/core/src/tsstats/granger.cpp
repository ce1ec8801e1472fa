#include "fewscast/tsstats/granger.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/distributions/fisher_f.hpp>

#include "fewscast/common/error.hpp"
#include "fewscast/tsstats/ols.hpp"

namespace fewscast::tsstats {

double f_survival(double f, double df1, double df2) {
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    const boost::math::fisher_f_distribution<double> dist(df1, df2);
    return boost::math::cdf(boost::math::complement(dist, f));
}

namespace {

struct AdlDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::size_t groups = 0;
};

bool usable_row(std::span<const double> y, std::span<const double> x, std::size_t t,
                std::size_t window) {
    if (!std::isfinite(y[t])) return false;
    for (std::size_t i = 1; i <= window; ++i) {
        if (!std::isfinite(y[t - i]) || !std::isfinite(x[t - i])) return false;
    }
    return true;
}

// Rows usable with `window` lags; only the first `lags` enter the regression.
AdlDesign build_adl(const PanelPairs& data, std::size_t lags, std::size_t window, bool with_x) {
    if (data.y.size() != data.x.size()) throw DataError("ADL: group counts differ");
    std::vector<std::vector<std::size_t>> rows(data.y.size());
    std::size_t total = 0, groups = 0;
    for (std::size_t g = 0; g < data.y.size(); ++g) {
        if (data.y[g].size() != data.x[g].size()) {
            throw DataError("ADL: y and x lengths differ in group " + std::to_string(g));
        }
        for (std::size_t t = window; t < data.y[g].size(); ++t) {
            if (usable_row(data.y[g], data.x[g], t, window)) rows[g].push_back(t);
        }
        total += rows[g].size();
        groups += rows[g].empty() ? 0 : 1;
    }
    const std::size_t cols = groups + lags * (with_x ? 2 : 1);
    AdlDesign d{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total),
                                      static_cast<Eigen::Index>(cols)),
                Eigen::VectorXd(static_cast<Eigen::Index>(total)), groups};
    Eigen::Index r = 0;
    Eigen::Index dummy = 0;
    for (std::size_t g = 0; g < rows.size(); ++g) {
        if (rows[g].empty()) continue;
        const auto y = data.y[g];
        const auto x = data.x[g];
        for (std::size_t t : rows[g]) {
            d.y[r] = y[t];
            d.X(r, dummy) = 1.0;
            for (std::size_t i = 1; i <= lags; ++i) {
                d.X(r, static_cast<Eigen::Index>(groups + i - 1)) = y[t - i];
                if (with_x) d.X(r, static_cast<Eigen::Index>(groups + lags + i - 1)) = x[t - i];
            }
            ++r;
        }
        ++dummy;
    }
    return d;
}

AdlFit fit_adl(const AdlDesign& d, std::size_t lags) {
    if (d.X.rows() <= d.X.cols()) {
        throw DataError("ADL: insufficient observations (" + std::to_string(d.X.rows()) +
                        ") for " + std::to_string(d.X.cols()) + " parameters");
    }
    const auto fit = ols(d.X, d.y, false);
    AdlFit out;
    out.lags = lags;
    out.coefficients.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());
    out.rss = fit.rss;
    out.nobs = fit.nobs;
    out.params = static_cast<std::size_t>(d.X.cols());
    const double n = static_cast<double>(out.nobs);
    out.aic = n * std::log(out.rss / n) + 2.0 * static_cast<double>(out.params);
    return out;
}

PanelPairs single(std::span<const double> y, std::span<const double> x) {
    PanelPairs p;
    p.add(y, x);
    return p;
}

}  // namespace

LagSelection select_lags_aic(const PanelPairs& data, std::size_t n_max) {
    if (n_max == 0) throw ConfigError("maximum lag order must be at least 1");
    LagSelection sel;
    double best = std::numeric_limits<double>::infinity();
    std::optional<RankDeficientError> failure;
    for (std::size_t n = 1; n <= n_max; ++n) {
        try {
            sel.candidates.push_back(fit_adl(build_adl(data, n, n_max, true), n));
        } catch (const RankDeficientError& e) {
            // a collinear candidate cannot win; keep its slot so candidates[n - 1] is order n
            AdlFit skipped;
            skipped.lags = n;
            skipped.aic = std::numeric_limits<double>::infinity();
            sel.candidates.push_back(skipped);
            if (!failure) failure = e;
            continue;
        }
        if (sel.candidates.back().aic < best) {
            best = sel.candidates.back().aic;
            sel.lags = n;
        }
    }
    if (sel.lags == 0) {
        if (failure) throw *failure;
        throw NumericalError("no lag order gives a finite AIC");
    }
    return sel;
}

LagSelection select_lags_aic(std::span<const double> y, std::span<const double> x,
                             std::size_t n_max) {
    if (y.size() <= 2 * n_max + 2) {
        throw DataError("lag selection needs more than " + std::to_string(2 * n_max + 2) +
                        " observations");
    }
    return select_lags_aic(single(y, x), n_max);
}

GrangerResult granger_test(const PanelPairs& data, std::size_t lags, double level) {
    if (lags == 0) throw ConfigError("Granger test needs at least one lag");
    const auto full = build_adl(data, lags, lags, true);
    const auto restricted = build_adl(data, lags, lags, false);
    const auto u = fit_adl(full, lags);
    const auto r = fit_adl(restricted, lags);

    GrangerResult out;
    out.lags = lags;
    out.nobs = u.nobs;
    out.df1 = lags;
    out.df2 = u.nobs - u.params;
    const double num = std::max(r.rss - u.rss, 0.0) / static_cast<double>(out.df1);
    const double den = u.rss / static_cast<double>(out.df2);
    out.f = num / den;
    if (!std::isfinite(out.f)) throw NumericalError("Granger F statistic is not finite");
    out.p_value = f_survival(out.f, static_cast<double>(out.df1), static_cast<double>(out.df2));
    out.causal = out.p_value < level;
    return out;
}

GrangerResult granger_test(std::span<const double> y, std::span<const double> x,
                           std::size_t lags, double level) {
    return granger_test(single(y, x), lags, level);
}

}  // namespace fewscast::tsstats
