#include "fewscast/pipeline/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"

namespace fewscast::pipeline {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"paths",
         {"corpus", "news_frames", "study_frames", "embeddings", "gazetteer", "panel",
          "projections", "output"}},
        {"corpus", {"window_start", "window_end", "denominator", "exclude_target_articles",
                    "strict"}},
        {"frames", {"target_keywords", "causal_links", "stem_dedup"}},
        {"expansion", {"radius", "min_count"}},
        {"screening",
         {"mode", "level", "adf_level", "max_lags", "adf_max_lag", "max_differences"}},
        {"clustering", {"k", "edge_max_distance"}},
        {"model", {"folds", "lasso_lambda", "spatial", "country_slopes"}},
        {"outbreak",
         {"grid_min", "grid_max", "crossed_thresholds", "match_window", "precision_target"}},
        {"run", {"seed", "trailing_mean"}},
    };
    return keys;
}

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& i : items) out += (out.empty() ? "" : ", ") + i;
    return out;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::filesystem::path base) : tree_(tree), base_(std::move(base)) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        const auto s = tree_.get_child_optional(section);
        if (!s) return std::nullopt;
        const auto v = s->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    void path(const std::string& key, std::filesystem::path& out) const {
        if (auto v = get("paths", key)) {
            out = v->empty() ? std::filesystem::path{} : resolve(*v);
        }
    }

    void flag(const std::string& section, const std::string& key, bool& out) const {
        if (auto v = get(section, key)) {
            if (*v == "true" || *v == "1" || *v == "yes") {
                out = true;
            } else if (*v == "false" || *v == "0" || *v == "no") {
                out = false;
            } else {
                throw ConfigError(section + "." + key + ": expected true or false, got '" + *v + "'");
            }
        }
    }

    void number(const std::string& section, const std::string& key, double& out) const {
        if (auto v = get(section, key)) out = parse_double(section + "." + key, *v);
    }

    template <typename Int>
    void count(const std::string& section, const std::string& key, Int& out) const {
        if (auto v = get(section, key)) {
            const double d = parse_double(section + "." + key, *v);
            if (d < 0 || d != static_cast<double>(static_cast<long long>(d))) {
                throw ConfigError(section + "." + key + ": expected a non-negative integer");
            }
            out = static_cast<Int>(d);
        }
    }

private:
    static double parse_double(const std::string& name, const std::string& text) {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(name + ": expected a number, got '" + text + "'");
        }
    }

    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_ / path;
    }

    const pt::ptree& tree_;
    std::filesystem::path base_;
};

void require_range(const std::string& name, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        throw ConfigError(name + " = " + csv::format_double(v) + " outside [" +
                          csv::format_double(lo) + ", " + csv::format_double(hi) + "]");
    }
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("cannot parse config " + path.string() + ": " + e.message() +
                          " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, child] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
        for (const auto& [key, value] : child) {
            if (!it->second.contains(key)) {
                throw ConfigError("unknown config key " + section + "." + key);
            }
        }
    }

    PipelineConfig c;
    const Reader r(tree, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
    r.path("corpus", c.paths.corpus);
    r.path("news_frames", c.paths.news_frames);
    r.path("study_frames", c.paths.study_frames);
    r.path("embeddings", c.paths.embeddings);
    r.path("gazetteer", c.paths.gazetteer);
    r.path("panel", c.paths.panel);
    r.path("projections", c.paths.projections);
    r.path("output", c.paths.output);
    if (c.paths.output.empty()) throw ConfigError("paths.output must not be empty");

    try {
        if (auto v = r.get("corpus", "window_start")) c.window.first = Date::parse(*v);
        if (auto v = r.get("corpus", "window_end")) c.window.last = Date::parse(*v);
    } catch (const DataError& e) {
        throw ConfigError(std::string("corpus window: ") + e.what());
    }
    if (auto v = r.get("corpus", "denominator")) {
        if (*v == "country") {
            c.denominator = corpus::Denominator::Country;
        } else if (*v == "corpus") {
            c.denominator = corpus::Denominator::Corpus;
        } else {
            throw ConfigError("corpus.denominator must be country or corpus");
        }
    }
    r.flag("corpus", "exclude_target_articles", c.exclude_target_articles);
    r.flag("corpus", "strict", c.strict);

    if (auto v = r.get("frames", "target_keywords")) c.target_keywords = split_list(*v);
    if (auto v = r.get("frames", "causal_links")) c.causal_links = split_list(*v);
    r.flag("frames", "stem_dedup", c.stem_dedup);

    r.number("expansion", "radius", c.wmd_radius);
    r.count("expansion", "min_count", c.ngram_min_count);

    if (auto v = r.get("screening", "mode")) {
        if (*v == "pooled") {
            c.screening.mode = tsstats::ScreeningMode::Pooled;
        } else if (*v == "per-district") {
            c.screening.mode = tsstats::ScreeningMode::PerDistrict;
        } else {
            throw ConfigError("screening.mode must be pooled or per-district");
        }
    }
    r.number("screening", "level", c.screening.level);
    if (auto v = r.get("screening", "adf_level")) {
        double level = 0.05;
        r.number("screening", "adf_level", level);
        c.screening.adf_level = tsstats::parse_adf_level(level);
    }
    r.count("screening", "max_lags", c.screening.max_lags);
    r.count("screening", "adf_max_lag", c.screening.adf_max_lag);
    r.count("screening", "max_differences", c.screening.max_differences);

    r.count("clustering", "k", c.clusters);
    r.number("clustering", "edge_max_distance", c.edge_max_distance);

    r.count("model", "folds", c.folds);
    if (auto v = r.get("model", "lasso_lambda"); v && !v->empty() && *v != "none") {
        double lambda = 0.0;
        r.number("model", "lasso_lambda", lambda);
        c.lasso_lambda = lambda;
    }
    r.flag("model", "spatial", c.spatial);
    r.flag("model", "country_slopes", c.country_slopes);

    r.number("outbreak", "grid_min", c.grid_min);
    r.number("outbreak", "grid_max", c.grid_max);
    r.flag("outbreak", "crossed_thresholds", c.crossed_thresholds);
    r.count("outbreak", "match_window", c.match_window);
    r.number("outbreak", "precision_target", c.precision_target);

    r.count("run", "seed", c.seed);
    r.flag("run", "trailing_mean", c.trailing_mean);

    validate_config(c, false);
    return c;
}

void validate_config(const PipelineConfig& c, bool check_paths) {
    if (c.window.empty()) throw ConfigError("corpus window is empty");
    require_range("expansion.radius", c.wmd_radius, 0.0, 1e6);
    require_range("screening.level", c.screening.level, 1e-12, 0.5);
    require_range("screening.max_lags", static_cast<double>(c.screening.max_lags), 1, 24);
    require_range("screening.adf_max_lag", static_cast<double>(c.screening.adf_max_lag), 0, 24);
    require_range("screening.max_differences", c.screening.max_differences, 0, 3);
    require_range("clustering.k", static_cast<double>(c.clusters), 1, 1000);
    require_range("clustering.edge_max_distance", c.edge_max_distance, 0.0, 1e6);
    require_range("model.folds", static_cast<double>(c.folds), 2, 100);
    if (c.lasso_lambda) require_range("model.lasso_lambda", *c.lasso_lambda, 0.0, 1e6);
    require_range("outbreak.grid_min", c.grid_min, 1.0, 5.0);
    require_range("outbreak.grid_max", c.grid_max, c.grid_min, 5.0);
    const auto tenths = [](double v) { return std::abs(v * 10 - std::round(v * 10)) < 1e-9; };
    if (!tenths(c.grid_min) || !tenths(c.grid_max)) {
        throw ConfigError("outbreak grid bounds must be multiples of 0.1");
    }
    require_range("outbreak.match_window", static_cast<double>(c.match_window), 0, 12);
    require_range("outbreak.precision_target", c.precision_target, 0.0, 1.0);
    if (!check_paths) return;
    const auto need = [](const std::filesystem::path& p, const char* name) {
        if (p.empty()) throw ConfigError(std::string("paths.") + name + " is not set");
        if (!std::filesystem::exists(p)) {
            throw ConfigError(std::string("paths.") + name + " does not exist: " + p.string());
        }
    };
    need(c.paths.corpus, "corpus");
    need(c.paths.news_frames, "news_frames");
    need(c.paths.embeddings, "embeddings");
    need(c.paths.gazetteer, "gazetteer");
    need(c.paths.panel, "panel");
    if (!c.paths.study_frames.empty()) need(c.paths.study_frames, "study_frames");
    if (!c.paths.projections.empty()) need(c.paths.projections, "projections");
}

void write_config(const std::filesystem::path& path, const PipelineConfig& c) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    const auto fmt = [](double v) { return csv::format_double(v); };
    const auto b = [](bool v) { return v ? "true" : "false"; };
    const auto rel = [&](const std::filesystem::path& p) {
        if (p.empty()) return std::string();
        const auto base = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
        return std::filesystem::proximate(p, base).generic_string();
    };
    out << "[paths]\n"
        << "corpus = " << rel(c.paths.corpus) << '\n'
        << "news_frames = " << rel(c.paths.news_frames) << '\n'
        << "study_frames = " << rel(c.paths.study_frames) << '\n'
        << "embeddings = " << rel(c.paths.embeddings) << '\n'
        << "gazetteer = " << rel(c.paths.gazetteer) << '\n'
        << "panel = " << rel(c.paths.panel) << '\n'
        << "projections = " << rel(c.paths.projections) << '\n'
        << "output = " << rel(c.paths.output) << "\n\n"
        << "[corpus]\n"
        << "window_start = " << c.window.first.str() << '\n'
        << "window_end = " << c.window.last.str() << '\n'
        << "denominator = " << (c.denominator == corpus::Denominator::Country ? "country" : "corpus") << '\n'
        << "exclude_target_articles = " << b(c.exclude_target_articles) << '\n'
        << "strict = " << b(c.strict) << "\n\n"
        << "[frames]\n";
    if (!c.target_keywords.empty()) out << "target_keywords = " << join_list(c.target_keywords) << '\n';
    if (!c.causal_links.empty()) out << "causal_links = " << join_list(c.causal_links) << '\n';
    out << "stem_dedup = " << b(c.stem_dedup) << "\n\n"
        << "[expansion]\n"
        << "radius = " << fmt(c.wmd_radius) << '\n'
        << "min_count = " << c.ngram_min_count << "\n\n"
        << "[screening]\n"
        << "mode = " << (c.screening.mode == tsstats::ScreeningMode::Pooled ? "pooled" : "per-district") << '\n'
        << "level = " << fmt(c.screening.level) << '\n'
        << "adf_level = "
        << (c.screening.adf_level == tsstats::AdfLevel::OnePercent
                ? "0.01"
                : c.screening.adf_level == tsstats::AdfLevel::FivePercent ? "0.05" : "0.1")
        << '\n'
        << "max_lags = " << c.screening.max_lags << '\n'
        << "adf_max_lag = " << c.screening.adf_max_lag << '\n'
        << "max_differences = " << c.screening.max_differences << "\n\n"
        << "[clustering]\n"
        << "k = " << c.clusters << '\n'
        << "edge_max_distance = " << fmt(c.edge_max_distance) << "\n\n"
        << "[model]\n"
        << "folds = " << c.folds << '\n'
        << "lasso_lambda = " << (c.lasso_lambda ? fmt(*c.lasso_lambda) : "none") << '\n'
        << "spatial = " << b(c.spatial) << '\n'
        << "country_slopes = " << b(c.country_slopes) << "\n\n"
        << "[outbreak]\n"
        << "grid_min = " << fmt(c.grid_min) << '\n'
        << "grid_max = " << fmt(c.grid_max) << '\n'
        << "crossed_thresholds = " << b(c.crossed_thresholds) << '\n'
        << "match_window = " << c.match_window << '\n'
        << "precision_target = " << fmt(c.precision_target) << "\n\n"
        << "[run]\n"
        << "seed = " << c.seed << '\n'
        << "trailing_mean = " << b(c.trailing_mean) << '\n';
}

std::string config_fingerprint(const PipelineConfig& c, std::string_view stage) {
    std::ostringstream s;
    const auto fmt = [](double v) { return csv::format_double(v); };
    const auto& o = c.screening;
    s << "stage=" << stage << ';';
    if (stage == "extract") {
        s << "targets=" << join_list(c.target_keywords) << ";links=" << join_list(c.causal_links)
          << ";stem_dedup=" << c.stem_dedup;
    } else if (stage == "expand") {
        s << "window=" << c.window.first.str() << ".." << c.window.last.str()
          << ";radius=" << fmt(c.wmd_radius) << ";min_count=" << c.ngram_min_count
          << ";strict=" << c.strict;
    } else if (stage == "factors") {
        s << "window=" << c.window.first.str() << ".." << c.window.last.str()
          << ";denominator=" << static_cast<int>(c.denominator)
          << ";exclude_targets=" << c.exclude_target_articles << ";strict=" << c.strict
          << ";targets=" << join_list(c.target_keywords);
    } else if (stage == "select") {
        s << "mode=" << static_cast<int>(o.mode) << ";level=" << fmt(o.level)
          << ";adf=" << static_cast<int>(o.adf_level) << ";max_lags=" << o.max_lags
          << ";adf_max_lag=" << o.adf_max_lag << ";max_d=" << o.max_differences
          << ";k=" << c.clusters << ";edges=" << fmt(c.edge_max_distance);
    } else if (stage == "fit" || stage == "ablate") {
        s << "folds=" << c.folds << ";lasso=" << (c.lasso_lambda ? fmt(*c.lasso_lambda) : "none")
          << ";spatial=" << c.spatial << ";country_slopes=" << c.country_slopes;
    } else if (stage == "classify") {
        s << "grid=" << fmt(c.grid_min) << ".." << fmt(c.grid_max)
          << ";crossed=" << c.crossed_thresholds << ";window=" << c.match_window
          << ";target=" << fmt(c.precision_target);
    } else if (stage == "report") {
        s << "trailing_mean=" << c.trailing_mean << ";target=" << fmt(c.precision_target);
    }
    return s.str();
}

}  // namespace fewscast::pipeline
