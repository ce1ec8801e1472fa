#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fewscast/common/error.hpp"
#include "fewscast/common/month.hpp"

namespace fewscast::outbreak {

/// An outbreak starting at `period` within one series.
struct SeriesEvent {
    std::size_t period = 0;
    int severity = 0;  ///< highest phase before the series drops back to <= 2

    auto operator<=>(const SeriesEvent&) const = default;
};

/// Events at every t with phase(t-1) <= 2, phase(t) >= 3 and phase(t+1) >= 3.
/// NaN entries never take part in an event. Series shorter than 3 periods give
/// no events and a warning.
std::vector<SeriesEvent> detect_outbreaks(std::span<const double> phases,
                                          std::vector<std::string>* warnings = nullptr);

/// Periods t with pred(t-1) <= l, pred(t) >= u and pred(t+1) >= u.
std::vector<std::size_t> classify(std::span<const double> pred, double l, double u);

/// Phases or predictions on the publication-period grid, one row per district.
struct PeriodPanel {
    std::vector<std::string> district_ids;
    std::vector<std::string> countries;  ///< parallel to district_ids
    std::vector<Month> periods;
    std::vector<std::vector<double>> values;  ///< [district][period], NaN where missing
};

struct OutbreakEvent {
    std::string district_id;
    std::size_t period = 0;
    int severity = 0;  ///< 0 for predicted events
};

std::vector<OutbreakEvent> detect_outbreaks(const PeriodPanel& phases);
std::vector<OutbreakEvent> classify(const PeriodPanel& predictions, double l, double u);

struct Score {
    std::size_t matched = 0;
    std::size_t predicted = 0;
    std::size_t actual = 0;
    std::optional<double> precision;  ///< null when nothing was predicted
    std::optional<double> recall;     ///< null when there is nothing to find
};

/// One-to-one matching within each district: predicted events in period order
/// take the earliest unmatched actual event with |start difference| <= window.
Score score(const std::vector<OutbreakEvent>& predicted, const std::vector<OutbreakEvent>& actual,
            std::size_t window = 0);

struct FrontPoint {
    double l = 0.0;
    double u = 0.0;
    std::optional<double> precision;
    double recall = 0.0;
};

struct GridOptions {
    int lo_tenths = 10;  ///< grid from lo_tenths / 10
    int hi_tenths = 50;  ///< to hi_tenths / 10 in steps of 0.1
    bool allow_crossed = false;  ///< also evaluate pairs with l >= u
    std::size_t window = 0;
};

std::vector<double> grid_values(const GridOptions& options);

/// Scores every (l, u) grid pair, in l-major order.
std::vector<FrontPoint> sweep_grid(const PeriodPanel& predictions,
                                   const std::vector<OutbreakEvent>& actual,
                                   const GridOptions& options = {});

/// Points not dominated in (precision, recall), sorted by recall. Among equal
/// (precision, recall) pairs the lexicographically smallest (l, u) is kept.
/// Points with null precision are left out unless no point has a precision,
/// in which case the front is the single smallest-(l, u) point at recall 0.
std::vector<FrontPoint> pareto_filter(const std::vector<FrontPoint>& points);

std::vector<FrontPoint> sweep_pareto(const PeriodPanel& predictions,
                                     const std::vector<OutbreakEvent>& actual,
                                     const GridOptions& options = {});

class UnattainablePrecisionError : public Error {
public:
    UnattainablePrecisionError(const std::string& what, double best)
        : Error(ErrorKind::Numerical, what), best_(best) {}
    /// Highest precision on the front (NaN when the front has none).
    [[nodiscard]] double best_precision() const { return best_; }

private:
    double best_;
};

/// The front point with maximal recall among those with precision >= target;
/// ties prefer higher precision, then smaller u, then smaller l.
FrontPoint recall_at_precision(const std::vector<FrontPoint>& front, double target = 0.80);

struct ExpertScore {
    Score score;
    std::size_t skipped = 0;  ///< missing projection cells
};

/// Scores expert projections, binarized with the outbreak rule, against actual events.
ExpertScore expert_baseline(const PeriodPanel& projections,
                            const std::vector<OutbreakEvent>& actual, std::size_t window = 0);

/// Value of a monthly series at each publication month.
std::vector<double> downsample(std::span<const double> monthly, Month first,
                               const std::vector<Month>& periods);

/// CSV: district_id,period,kind,model,severity
struct EventRecord {
    std::string district_id;
    Month period;
    std::string kind;  ///< actual | predicted
    std::string model;
    int severity = 0;
};
void write_events_csv(const std::filesystem::path& path, const std::vector<EventRecord>& events);

/// CSV: l,u,precision,recall,model
void write_front_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::vector<FrontPoint>>>& fronts);
std::vector<std::pair<std::string, std::vector<FrontPoint>>> read_front_csv(
    const std::filesystem::path& path);

}  // namespace fewscast::outbreak
