#include "fewscast/outbreak/outbreak.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "fewscast/common/csv.hpp"

namespace fewscast::outbreak {

std::vector<SeriesEvent> detect_outbreaks(std::span<const double> phases,
                                          std::vector<std::string>* warnings) {
    std::vector<SeriesEvent> out;
    if (phases.size() < 3) {
        if (warnings) warnings->push_back("series shorter than 3 periods; no outbreaks");
        return out;
    }
    for (std::size_t t = 1; t + 1 < phases.size(); ++t) {
        if (!(phases[t - 1] <= 2.0 && phases[t] >= 3.0 && phases[t + 1] >= 3.0)) continue;
        double peak = phases[t];
        for (std::size_t s = t + 1; s < phases.size() && phases[s] >= 3.0; ++s) {
            peak = std::max(peak, phases[s]);
        }
        out.push_back({t, static_cast<int>(std::lround(peak))});
    }
    return out;
}

std::vector<std::size_t> classify(std::span<const double> pred, double l, double u) {
    std::vector<std::size_t> out;
    for (std::size_t t = 1; t + 1 < pred.size(); ++t) {
        if (pred[t - 1] <= l && pred[t] >= u && pred[t + 1] >= u) out.push_back(t);
    }
    return out;
}

std::vector<OutbreakEvent> detect_outbreaks(const PeriodPanel& phases) {
    std::vector<OutbreakEvent> out;
    for (std::size_t d = 0; d < phases.values.size(); ++d) {
        for (const auto& e : detect_outbreaks(phases.values[d])) {
            out.push_back({phases.district_ids[d], e.period, e.severity});
        }
    }
    return out;
}

std::vector<OutbreakEvent> classify(const PeriodPanel& predictions, double l, double u) {
    std::vector<OutbreakEvent> out;
    for (std::size_t d = 0; d < predictions.values.size(); ++d) {
        for (auto t : classify(predictions.values[d], l, u)) {
            out.push_back({predictions.district_ids[d], t, 0});
        }
    }
    return out;
}

Score score(const std::vector<OutbreakEvent>& predicted, const std::vector<OutbreakEvent>& actual,
            std::size_t window) {
    std::map<std::string, std::vector<std::size_t>> pred_by, act_by;
    for (const auto& e : predicted) pred_by[e.district_id].push_back(e.period);
    for (const auto& e : actual) act_by[e.district_id].push_back(e.period);
    Score s;
    s.predicted = predicted.size();
    s.actual = actual.size();
    for (auto& [district, preds] : pred_by) {
        const auto it = act_by.find(district);
        if (it == act_by.end()) continue;
        auto acts = it->second;
        std::sort(preds.begin(), preds.end());
        std::sort(acts.begin(), acts.end());
        std::vector<bool> used(acts.size(), false);
        for (auto p : preds) {
            for (std::size_t i = 0; i < acts.size(); ++i) {
                if (used[i]) continue;
                const auto gap = p > acts[i] ? p - acts[i] : acts[i] - p;
                if (gap <= window) {
                    used[i] = true;
                    ++s.matched;
                    break;
                }
            }
        }
    }
    if (s.predicted > 0) {
        s.precision = static_cast<double>(s.matched) / static_cast<double>(s.predicted);
    }
    if (s.actual > 0) s.recall = static_cast<double>(s.matched) / static_cast<double>(s.actual);
    return s;
}

std::vector<double> grid_values(const GridOptions& options) {
    if (options.hi_tenths < options.lo_tenths) throw ConfigError("empty threshold grid");
    std::vector<double> out;
    for (int k = options.lo_tenths; k <= options.hi_tenths; ++k) out.push_back(k / 10.0);
    return out;
}

std::vector<FrontPoint> sweep_grid(const PeriodPanel& predictions,
                                   const std::vector<OutbreakEvent>& actual,
                                   const GridOptions& options) {
    struct Candidate {
        std::size_t district;
        std::size_t period;
        double before;  ///< pred(t-1)
        double level;   ///< min(pred(t), pred(t+1))
    };
    std::vector<Candidate> candidates;
    for (std::size_t d = 0; d < predictions.values.size(); ++d) {
        const auto& v = predictions.values[d];
        for (std::size_t t = 1; t + 1 < v.size(); ++t) {
            if (std::isnan(v[t - 1]) || std::isnan(v[t]) || std::isnan(v[t + 1])) continue;
            candidates.push_back({d, t, v[t - 1], std::min(v[t], v[t + 1])});
        }
    }
    const auto grid = grid_values(options);
    std::vector<FrontPoint> out;
    std::vector<OutbreakEvent> events;
    for (double l : grid) {
        for (double u : grid) {
            if (!options.allow_crossed && !(l < u)) continue;
            events.clear();
            for (const auto& c : candidates) {
                if (c.before <= l && c.level >= u) {
                    events.push_back({predictions.district_ids[c.district], c.period, 0});
                }
            }
            const auto s = score(events, actual, options.window);
            out.push_back({l, u, s.precision, s.recall.value_or(0.0)});
        }
    }
    return out;
}

std::vector<FrontPoint> pareto_filter(const std::vector<FrontPoint>& points) {
    std::vector<FrontPoint> scored;
    for (const auto& p : points) {
        if (p.precision) scored.push_back(p);
    }
    const auto lex = [](const FrontPoint& a, const FrontPoint& b) {
        return std::tie(a.l, a.u) < std::tie(b.l, b.u);
    };
    if (scored.empty()) {
        if (points.empty()) return {};
        FrontPoint p = *std::min_element(points.begin(), points.end(), lex);
        p.precision.reset();
        p.recall = 0.0;
        return {p};
    }
    std::vector<FrontPoint> front;
    for (const auto& p : scored) {
        bool dominated = false;
        for (const auto& q : scored) {
            const bool ge = *q.precision >= *p.precision && q.recall >= p.recall;
            const bool gt = *q.precision > *p.precision || q.recall > p.recall;
            if (ge && gt) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        const auto same = std::find_if(front.begin(), front.end(), [&](const FrontPoint& q) {
            return *q.precision == *p.precision && q.recall == p.recall;
        });
        if (same == front.end()) {
            front.push_back(p);
        } else if (lex(p, *same)) {
            *same = p;
        }
    }
    std::sort(front.begin(), front.end(), [](const FrontPoint& a, const FrontPoint& b) {
        if (a.recall != b.recall) return a.recall < b.recall;
        return *a.precision > *b.precision;
    });
    return front;
}

std::vector<FrontPoint> sweep_pareto(const PeriodPanel& predictions,
                                     const std::vector<OutbreakEvent>& actual,
                                     const GridOptions& options) {
    return pareto_filter(sweep_grid(predictions, actual, options));
}

FrontPoint recall_at_precision(const std::vector<FrontPoint>& front, double target) {
    if (front.empty()) throw DataError("recall at precision: empty front");
    const FrontPoint* best = nullptr;
    double best_precision = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : front) {
        if (!p.precision) continue;
        if (!(*p.precision <= best_precision)) best_precision = *p.precision;
        if (*p.precision < target) continue;
        if (!best || std::make_tuple(p.recall, *p.precision, -p.u, -p.l) >
                         std::make_tuple(best->recall, *best->precision, -best->u, -best->l)) {
            best = &p;
        }
    }
    if (!best) {
        throw UnattainablePrecisionError(
            "no threshold pair reaches precision " + csv::format_double(target) +
                " (best " + csv::format_double(best_precision) + ")",
            best_precision);
    }
    return *best;
}

ExpertScore expert_baseline(const PeriodPanel& projections,
                            const std::vector<OutbreakEvent>& actual, std::size_t window) {
    ExpertScore out;
    for (const auto& row : projections.values) {
        for (double v : row) out.skipped += std::isnan(v) ? 1 : 0;
    }
    out.score = score(detect_outbreaks(projections), actual, window);
    return out;
}

std::vector<double> downsample(std::span<const double> monthly, Month first,
                               const std::vector<Month>& periods) {
    std::vector<double> out;
    out.reserve(periods.size());
    for (const auto& m : periods) {
        const int i = m - first;
        out.push_back(i >= 0 && i < static_cast<int>(monthly.size())
                          ? monthly[static_cast<std::size_t>(i)]
                          : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

void write_events_csv(const std::filesystem::path& path, const std::vector<EventRecord>& events) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"district_id", "period", "kind", "model", "severity"});
    for (const auto& e : events) {
        w.field(e.district_id).field(e.period.str()).field(e.kind).field(e.model);
        if (e.severity > 0) {
            w.field(e.severity);
        } else {
            w.field(std::string_view{});
        }
        w.end_row();
    }
}

void write_front_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::vector<FrontPoint>>>& fronts) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Writer w(out);
    w.row({"l", "u", "precision", "recall", "model"});
    for (const auto& [model, front] : fronts) {
        for (const auto& p : front) {
            w.field(p.l).field(p.u);
            if (p.precision) {
                w.field(*p.precision);
            } else {
                w.field(std::string_view{});
            }
            w.field(p.recall).field(model);
            w.end_row();
        }
    }
}

std::vector<std::pair<std::string, std::vector<FrontPoint>>> read_front_csv(
    const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto cl = table.column("l");
    const auto cu = table.column("u");
    const auto cp = table.column("precision");
    const auto cr = table.column("recall");
    const auto cm = table.column("model");
    std::vector<std::pair<std::string, std::vector<FrontPoint>>> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        FrontPoint p;
        try {
            p.l = std::stod(row[cl]);
            p.u = std::stod(row[cu]);
            if (!row[cp].empty()) p.precision = std::stod(row[cp]);
            p.recall = std::stod(row[cr]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[i]) +
                            ": malformed front row");
        }
        if (out.empty() || out.back().first != row[cm]) out.emplace_back(row[cm], std::vector<FrontPoint>{});
        out.back().second.push_back(p);
    }
    return out;
}

}  // namespace fewscast::outbreak
