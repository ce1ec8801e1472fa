#include "fewscast/tsstats/screening.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/tsstats/correlation.hpp"

namespace fewscast::tsstats {

namespace {

std::vector<double> finite_values(const std::vector<double>& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (double v : series) {
        if (std::isfinite(v)) out.push_back(v);
    }
    return out;
}

bool all_zero(const std::vector<std::vector<double>>& x) {
    for (const auto& s : x) {
        for (double v : s) {
            if (std::isfinite(v) && v != 0.0) return false;
        }
    }
    return true;
}

/// Differences in place, keeping the length: the first `d` entries become NaN.
std::vector<double> difference_aligned(const std::vector<double>& series, int d) {
    std::vector<double> out = series;
    for (int k = 0; k < d; ++k) {
        for (std::size_t t = out.size(); t-- > 0;) {
            out[t] = t == 0 ? std::numeric_limits<double>::quiet_NaN() : out[t] - out[t - 1];
        }
    }
    return out;
}

bool passes_adf(const std::vector<double>& series, const ScreeningOptions& options) {
    if (series.size() < 13) return false;
    const std::size_t lag = std::min(options.adf_max_lag, series.size() - 12);
    try {
        return adf_test(series, lag, options.adf_level).stationary;
    } catch (const DataError&) {
        // a series that becomes constant after differencing has no unit root left
        return is_constant(series);
    }
}

ScreeningResult rejected(const std::string& feature, std::string reason) {
    ScreeningResult r;
    r.feature = feature;
    r.reason = std::move(reason);
    return r;
}

ScreeningResult screen_pooled(const std::string& feature,
                              const std::vector<std::vector<double>>& y,
                              const std::vector<std::vector<double>>& x,
                              const ScreeningOptions& options) {
    int d = 0;
    try {
        d = common_differencing_order(x, options);
    } catch (const NonStationaryError&) {
        return rejected(feature, "non-stationary");
    }
    std::vector<std::vector<double>> xd;
    xd.reserve(x.size());
    for (const auto& s : x) xd.push_back(difference_aligned(s, d));
    PanelPairs pairs;
    for (std::size_t g = 0; g < y.size(); ++g) pairs.add(y[g], xd[g]);

    ScreeningResult r;
    r.feature = feature;
    r.differencing_order = d;
    try {
        const auto sel = select_lags_aic(pairs, options.max_lags);
        const auto test = granger_test(pairs, sel.lags, options.level);
        r.f = test.f;
        r.p_value = test.p_value;
        r.lags = test.lags;
        r.retained = test.causal;
    } catch (const NumericalError& e) {
        r.reason = e.what();
    } catch (const DataError& e) {
        r.reason = e.what();
    }
    return r;
}

ScreeningResult screen_per_district(const std::string& feature,
                                    const std::vector<std::vector<double>>& y,
                                    const std::vector<std::vector<double>>& x,
                                    const ScreeningOptions& options) {
    ScreeningResult best = rejected(feature, "no testable district");
    best.p_value = 1.0;
    std::size_t tested = 0;
    for (std::size_t g = 0; g < y.size(); ++g) {
        const auto xs = finite_values(x[g]);
        if (xs.size() < 13 || is_constant(xs)) continue;
        try {
            const std::size_t lag = std::min(options.adf_max_lag, xs.size() - 12);
            const auto diff = difference_until_stationary(xs, options.max_differences, lag,
                                                          options.adf_level);
            const auto xd = difference_aligned(x[g], diff.order);
            const auto sel = select_lags_aic(y[g], xd, options.max_lags);
            const auto test = granger_test(y[g], xd, sel.lags, options.level);
            ++tested;
            if (tested == 1 || test.p_value < best.p_value) {
                best.f = test.f;
                best.p_value = test.p_value;
                best.lags = test.lags;
                best.differencing_order = diff.order;
            }
        } catch (const NumericalError&) {
        } catch (const DataError&) {
        }
    }
    if (tested == 0) return best;
    best.reason.clear();
    best.p_value = std::min(1.0, best.p_value * static_cast<double>(tested));
    best.retained = best.p_value < options.level;
    return best;
}

}  // namespace

int common_differencing_order(const std::vector<std::vector<double>>& x,
                              const ScreeningOptions& options) {
    std::vector<std::vector<double>> varying;
    for (const auto& s : x) {
        auto v = finite_values(s);
        if (!is_constant(v)) varying.push_back(std::move(v));
    }
    if (varying.empty()) return 0;
    for (int d = 0; d <= options.max_differences; ++d) {
        std::size_t pass = 0;
        for (const auto& s : varying) {
            const auto diffed = difference_aligned(s, d);
            if (passes_adf({diffed.begin() + d, diffed.end()}, options)) ++pass;
        }
        if (2 * pass > varying.size()) return d;
    }
    throw NonStationaryError("no common differencing order up to " +
                                 std::to_string(options.max_differences),
                             std::numeric_limits<double>::quiet_NaN());
}

ScreeningResult screen_feature(const std::string& feature,
                               const std::vector<std::vector<double>>& y,
                               const std::vector<std::vector<double>>& x,
                               const ScreeningOptions& options) {
    if (y.size() != x.size()) throw DataError("screening: district counts differ for " + feature);
    if (all_zero(x)) return rejected(feature, "all-zero factor");
    return options.mode == ScreeningMode::Pooled ? screen_pooled(feature, y, x, options)
                                                 : screen_per_district(feature, y, x, options);
}

std::vector<ScreeningResult> select_features(
    const std::vector<std::string>& features, const std::vector<std::vector<double>>& y,
    const std::function<std::vector<std::vector<double>>(const std::string&)>& factor_of,
    const ScreeningOptions& options) {
    std::vector<ScreeningResult> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(screen_feature(f, y, factor_of(f), options));
    return out;
}

void write_screening_csv(const std::filesystem::path& path,
                         const std::vector<ScreeningResult>& results) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"feature", "F", "p", "lag_n", "differencing_d", "decision"});
    for (const auto& r : results) {
        w.field(r.feature).field(r.f).field(r.p_value).field(r.lags).field(r.differencing_order);
        w.field(r.retained ? std::string("retained")
                           : (r.reason.empty() ? std::string("rejected") : "rejected: " + r.reason));
        w.end_row();
    }
}

std::vector<ScreeningResult> read_screening_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto cf = table.column("feature");
    const auto cF = table.column("F");
    const auto cp = table.column("p");
    const auto cn = table.column("lag_n");
    const auto cd = table.column("differencing_d");
    const auto cdec = table.column("decision");
    std::vector<ScreeningResult> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        ScreeningResult r;
        try {
            r.feature = row[cf];
            r.f = std::stod(row[cF]);
            r.p_value = std::stod(row[cp]);
            r.lags = static_cast<std::size_t>(std::stoul(row[cn]));
            r.differencing_order = std::stoi(row[cd]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[i]) +
                            ": malformed screening row");
        }
        const std::string& dec = row[cdec];
        r.retained = dec == "retained";
        if (dec.rfind("rejected: ", 0) == 0) r.reason = dec.substr(10);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fewscast::tsstats
