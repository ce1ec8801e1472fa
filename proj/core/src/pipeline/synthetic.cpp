#include "fewscast/pipeline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"

#include "fewscast/common/csv.hpp"
#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"
#include "fewscast/outbreak/outbreak.hpp"
#include "fewscast/pipeline/config.hpp"

namespace fewscast::pipeline {

namespace {

using Rng = std::mt19937_64;

constexpr std::size_t kDim = 16;

const std::vector<std::string>& decoy_words() {
    static const std::vector<std::string> words = {
        "football", "election",  "tourism",  "concert", "festival", "museum",   "parliament",
        "satellite", "railway",  "bank",     "startup", "telecom",  "airline",  "cinema",
        "marathon", "orchestra", "theatre",  "fashion", "bridge",   "harbour",  "lottery",
        "budget",   "tariff",    "summit",   "visa",    "software", "painting", "poetry",
        "library",  "wedding",   "chess",    "tennis",  "cricket",  "golf",     "yacht",
        "opera",    "sculpture", "carnival", "rugby",   "ballet"};
    return words;
}

const std::vector<std::pair<std::string, std::string>>& decoy_near_terms() {
    static const std::vector<std::pair<std::string, std::string>> near = {
        {"election", "elections"}, {"football", "soccer"},     {"tourism", "tourists"},
        {"concert", "concerts"},   {"festival", "festivities"}};
    return near;
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {
        "officials", "said",      "reported",   "region",     "week",       "local",
        "government", "residents", "people",    "area",       "according",  "statement",
        "agency",    "monday",    "tuesday",    "wednesday",  "thursday",   "friday",
        "morning",   "evening",   "village",    "town",       "capital",    "minister",
        "council",   "meeting",   "plan",       "program",    "project",    "community",
        "leaders",   "market",    "traders",    "schools",    "roads",      "hospital",
        "workers",   "farmers",   "families",   "children",   "women",      "youth",
        "police",    "spokesman", "authorities", "report",    "survey",     "data",
        "month",     "year",      "season",     "northern",   "southern",   "eastern",
        "western",   "central",   "rural",      "urban",      "national",   "regional",
        "visit",     "announced", "expected",   "recent",     "ongoing",    "several",
        "many",      "new",       "local",      "district",   "province",   "country",
        "partners",  "donors",    "team",       "office",     "radio",      "newspaper",
        "interview", "update"};
    return words;
}

const std::vector<std::string>& indicator_names() {
    static const std::vector<std::string> names = {
        "fatalities",         "conflict_events",      "food_price_change",
        "food_price_deviation", "evapotranspiration", "rainfall",
        "rainfall_deficit",   "vegetation_inverted",  "vegetation_deviation"};
    return names;
}

/// Effect phrases of the synthetic frames.
const std::vector<std::string>& effect_phrases() {
    static const std::vector<std::string> phrases = {"famine", "hunger", "food insecurity"};
    return phrases;
}

/// Target keywords mentioned in crisis coverage.
const std::vector<std::string>& crisis_keywords() {
    static const std::vector<std::string> words = {"famine"};
    return words;
}

std::string district_name(std::size_t i) {
    static const char* syl[] = {"ka", "lo", "mi", "ne", "ru", "ta", "bo", "si", "de", "ga",
                                "pu", "ze", "vo", "hi", "ju", "fe", "wa", "xo", "qi", "ya"};
    return std::string(syl[i % 20]) + syl[(i / 20) % 20] + syl[(i * 7 + 3) % 20] + "ndo";
}

int days_in_month(int year, int month) {
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return month == 2 && leap ? 29 : days[month - 1];
}

std::string hex_id(Rng& rng) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

std::vector<double> random_vector(Rng& rng, double sd) {
    std::normal_distribution<double> n(0.0, sd);
    std::vector<double> v(kDim);
    for (auto& x : v) x = n(rng);
    return v;
}

std::vector<double> around(Rng& rng, const std::vector<double>& centre, double sd) {
    auto v = random_vector(rng, sd);
    for (std::size_t i = 0; i < kDim; ++i) v[i] += centre[i];
    return v;
}

/// Latent monthly crisis state of one district.
struct Latent {
    std::vector<int> phase;
    std::vector<bool> crisis;
    std::vector<bool> heralded;

    [[nodiscard]] double intensity(long m) const {
        m = std::clamp<long>(m, 0, static_cast<long>(phase.size()) - 1);
        const auto i = static_cast<std::size_t>(m);
        return crisis[i] ? (phase[i] - 1) / 4.0 : 0.0;
    }
    [[nodiscard]] double announced(long m) const {
        m = std::clamp<long>(m, 0, static_cast<long>(phase.size()) - 1);
        return heralded[static_cast<std::size_t>(m)] ? intensity(m) : 0.0;
    }
};

Latent simulate_latent(const SyntheticSpec& spec, std::size_t length, Rng& rng) {
    Latent l;
    l.phase.resize(length);
    l.crisis.assign(length, false);
    l.heralded.assign(length, false);
    int calm_phase = coin(rng, 0.5) ? 1 : 2;
    int calm_run = spec.min_calm_months;
    std::size_t m = 0;
    std::uniform_int_distribution<int> duration(spec.min_episode_months, spec.max_episode_months);
    std::discrete_distribution<int> severity({0.6, 0.32, 0.08});
    while (m < length) {
        if (calm_run >= spec.min_calm_months && coin(rng, spec.episode_rate)) {
            const int len = duration(rng);
            const int phase = 3 + severity(rng);
            const bool heralded = !coin(rng, spec.unheralded_share);
            for (int k = 0; k < len && m < length; ++k, ++m) {
                l.phase[m] = phase;
                l.crisis[m] = true;
                l.heralded[m] = heralded;
            }
            calm_run = 0;
            continue;
        }
        if (coin(rng, spec.calm_flip_rate)) calm_phase = 3 - calm_phase;
        l.phase[m] = calm_phase;
        ++calm_run;
        ++m;
    }
    return l;
}

void check_spec(const SyntheticSpec& s) {
    if (s.districts < 5) throw ConfigError("synthetic: need at least 5 districts");
    if (s.months < 36) throw ConfigError("synthetic: need at least 36 months");
    if (s.districts_per_province == 0 || s.provinces_per_country == 0) {
        throw ConfigError("synthetic: province and country sizes must be positive");
    }
    if (s.min_episode_months < 1 || s.max_episode_months < s.min_episode_months) {
        throw ConfigError("synthetic: invalid episode length range");
    }
    for (const auto& p : s.planted) {
        if (p.lead < 0 || p.lead > 8) throw ConfigError("synthetic: planted lead outside 0..8 months");
        if (!std::isfinite(p.effect)) throw ConfigError("synthetic: planted effect must be finite");
        if (text::split(p.ngram).empty() || text::split(p.ngram).size() > 3) {
            throw ConfigError("synthetic: planted feature must have 1-3 tokens");
        }
    }
    for (double r : {s.base_rate, s.episode_rate, s.unheralded_share, s.calm_flip_rate,
                     s.missing_indicator_share, s.expert_hit_rate, s.near_term_share}) {
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("synthetic: rates must lie in [0, 1]");
    }
}

nlohmann::json frame_json(const std::string& doc, int sentence, const std::string& label,
                          const std::vector<std::pair<std::string, std::string>>& parts,
                          const std::string& provenance) {
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& [role, phrase] : parts) {
        cons.push_back({{"role", role}, {"tokens", text::split(phrase)}});
    }
    return {{"doc_id", doc},
            {"sentence_index", sentence},
            {"frame_label", label},
            {"constituents", cons},
            {"provenance", provenance}};
}

}  // namespace

std::vector<PlantedFeature> SyntheticSpec::default_planted() {
    return {{"conflict", 3, 0.9, {"fighting"}},
            {"drought", 3, 0.9, {}},
            {"locusts", 2, 0.9, {}},
            {"floods", 2, 0.9, {"flooding"}},
            {"crop failure", 1, 0.9, {}}};
}

std::vector<std::string> SyntheticSpec::default_coverage() {
    return {"displacement"};
}

bool is_publication_month(Month m) {
    if (m.year() <= 2015) return m.month() == 2 || m.month() == 6 || m.month() == 10;
    return m.month() == 1 || m.month() == 4 || m.month() == 7 || m.month() == 10;
}

SyntheticOutput generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                   const std::filesystem::path& directory) {
    check_spec(spec);
    std::filesystem::create_directories(directory);
    Rng rng(seed);
    SyntheticOutput out;
    out.directory = directory;
    out.corpus = directory / "corpus.jsonl";
    out.news_frames = directory / "frames_news.jsonl";
    out.study_frames = directory / "frames_study.jsonl";
    out.embeddings = directory / "embeddings.txt";
    out.gazetteer = directory / "gazetteer.csv";
    out.panel = directory / "panel.csv";
    out.projections = directory / "projections.csv";
    out.ground_truth = directory / "ground_truth.json";
    out.config = directory / "config.ini";

    const std::size_t D = spec.districts;
    std::vector<std::string> ids, names, province, country;
    for (std::size_t d = 0; d < D; ++d) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "D%03zu", d);
        ids.emplace_back(buf);
        names.push_back(district_name(d));
        const std::size_t p = d / spec.districts_per_province;
        std::snprintf(buf, sizeof buf, "P%02zu", p);
        province.emplace_back(buf);
        const std::size_t c = p / spec.provinces_per_country;
        country.push_back({static_cast<char>('X' + (c / 26) % 3), static_cast<char>('A' + c % 26)});
    }
    std::vector<std::string> countries = country;
    std::sort(countries.begin(), countries.end());
    countries.erase(std::unique(countries.begin(), countries.end()), countries.end());

    {
        std::ofstream g(out.gazetteer);
        csv::Writer w(g);
        w.row({"district_id", "name", "aliases", "province_id", "country", "lat", "lon",
               "population", "area_km2", "ruggedness", "cropland_share", "pasture_share"});
        std::lognormal_distribution<double> pop(11.5, 0.8);
        std::uniform_real_distribution<double> area(500.0, 9000.0), rug(0.0, 4.0), share(0.05, 0.6);
        const std::size_t cols = 8;
        for (std::size_t d = 0; d < D; ++d) {
            w.field(ids[d]).field(names[d]).field(std::string_view{}).field(province[d]).field(country[d]);
            w.field(5.0 + 0.5 * static_cast<double>(d / cols)).field(30.0 + 0.5 * static_cast<double>(d % cols));
            w.field(std::round(pop(rng))).field(std::round(area(rng)));
            w.field(rug(rng)).field(share(rng)).field(share(rng) / 2);
            w.end_row();
        }
    }

    // Latent states cover a margin on both sides so leads and delays stay defined.
    const long margin = 12;
    const std::size_t length = spec.months + 2 * static_cast<std::size_t>(margin);
    std::vector<Latent> latent;
    for (std::size_t d = 0; d < D; ++d) latent.push_back(simulate_latent(spec, length, rng));
    const auto at = [&](std::size_t t) { return static_cast<long>(t) + margin; };

    std::vector<Month> periods;
    for (std::size_t t = 0; t < spec.months; ++t) {
        const Month m = spec.first + static_cast<int>(t);
        if (is_publication_month(m)) periods.push_back(m);
    }

    const auto& ind_names = indicator_names();
    struct IndicatorShape {
        std::string name;
        int delay;
        double amplitude;
    };
    std::vector<IndicatorShape> shapes;
    for (std::size_t k = 0; k < spec.indicators; ++k) {
        const std::string name = k < ind_names.size() ? ind_names[k] : "indicator_" + std::to_string(k + 1);
        const bool informative = k + 2 < spec.indicators || spec.indicators < 3;
        shapes.push_back({name, 1 + static_cast<int>(k % 3), informative ? 1.0 : 0.0});
    }

    GroundTruth truth;
    {
        std::ofstream p(out.panel);
        csv::Writer w(p);
        std::vector<std::string> header = {"district_id", "month", "ipc_phase"};
        for (const auto& s : shapes) header.push_back(s.name);
        w.row(header);
        std::normal_distribution<double> noise(0.0, spec.indicator_noise);
        for (std::size_t d = 0; d < D; ++d) {
            std::vector<double> published;
            for (std::size_t t = 0; t < spec.months; ++t) {
                const Month m = spec.first + static_cast<int>(t);
                w.field(ids[d]).field(m.str());
                if (is_publication_month(m)) {
                    const int phase = latent[d].phase[static_cast<std::size_t>(at(t))];
                    w.field(phase);
                    published.push_back(phase);
                } else {
                    w.field(std::string_view{});
                }
                for (const auto& s : shapes) {
                    const double v = s.amplitude * latent[d].intensity(at(t) - s.delay) + noise(rng);
                    if (coin(rng, spec.missing_indicator_share)) {
                        w.field(std::string_view{});
                    } else {
                        w.field(std::round(v * 1e4) / 1e4);
                    }
                }
                w.end_row();
            }
            for (const auto& e : outbreak::detect_outbreaks(published)) {
                truth.outbreaks.push_back({ids[d], periods[e.period], e.severity});
            }
        }
    }

    {
        std::ofstream p(out.projections);
        csv::Writer w(p);
        w.row({"district_id", "period", "projected_phase"});
        for (std::size_t d = 0; d < D; ++d) {
            int previous = latent[d].phase[static_cast<std::size_t>(at(0))];
            for (const auto& m : periods) {
                const int phase = latent[d].phase[static_cast<std::size_t>(at(static_cast<std::size_t>(m - spec.first)))];
                const int projected = coin(rng, spec.expert_hit_rate) ? phase : previous;
                w.field(ids[d]).field(m.str()).field(projected);
                w.end_row();
                previous = phase;
            }
        }
    }

    // Decoys and their base rates.
    std::vector<std::string> decoys;
    for (std::size_t j = 0; j < spec.decoys; ++j) {
        decoys.push_back(j < decoy_words().size() ? decoy_words()[j]
                                                  : "decoy" + std::to_string(j + 1));
    }
    std::vector<double> decoy_rate;
    std::uniform_real_distribution<double> rate(0.01, 0.06);
    for (std::size_t j = 0; j < decoys.size(); ++j) decoy_rate.push_back(rate(rng));
    std::vector<std::pair<std::size_t, std::string>> decoy_near;
    for (const auto& [word, near] : decoy_near_terms()) {
        const auto it = std::find(decoys.begin(), decoys.end(), word);
        if (it != decoys.end()) decoy_near.emplace_back(static_cast<std::size_t>(it - decoys.begin()), near);
    }

    {
        std::ofstream c(out.corpus);
        const auto& filler = filler_words();
        std::uniform_int_distribution<std::size_t> pick_filler(0, filler.size() - 1);
        std::uniform_int_distribution<int> filler_count(6, 10);
        std::uniform_int_distribution<int> source(1, 5);
        const auto& keywords = crisis_keywords();
        const auto emit = [&](const Month& m, const std::string& ctry, const std::vector<std::string>& chunks_in) {
            auto chunks = chunks_in;
            const int n = filler_count(rng);
            for (int i = 0; i < n; ++i) chunks.push_back(filler[pick_filler(rng)]);
            std::shuffle(chunks.begin(), chunks.end(), rng);
            std::uniform_int_distribution<int> day(1, days_in_month(m.year(), m.month()));
            nlohmann::ordered_json a;
            a["id"] = hex_id(rng);
            a["date"] = Date{m.year(), m.month(), day(rng)}.str();
            a["source"] = "wire" + std::to_string(source(rng));
            a["countries"] = {ctry};
            std::string body;
            for (const auto& ch : chunks) body += (body.empty() ? "" : " ") + ch;
            a["text"] = body + ".";
            c << a.dump() << '\n';
        };
        for (std::size_t t = 0; t < spec.months; ++t) {
            const Month m = spec.first + static_cast<int>(t);
            for (std::size_t d = 0; d < D; ++d) {
                const auto& L = latent[d];
                for (std::size_t k = 0; k < spec.articles_per_district; ++k) {
                    std::vector<std::string> chunks = {names[d]};
                    for (const auto& f : spec.planted) {
                        const double p = spec.base_rate + f.effect * L.announced(at(t) + f.lead);
                        const bool on = coin(rng, std::min(p, 0.95));
                        if (on) chunks.push_back(f.ngram);
                        for (const auto& near : f.near_terms) {
                            if (coin(rng, on ? std::max(spec.near_term_share, spec.base_rate) : spec.base_rate)) {
                                chunks.push_back(near);
                            }
                        }
                    }
                    const double s = L.intensity(at(t));
                    for (const auto& cv : spec.coverage) {
                        if (coin(rng, std::min(spec.base_rate + spec.coverage_effect * s, 0.95))) {
                            chunks.push_back(cv);
                        }
                    }
                    if (s > 0.0 && coin(rng, 0.6 * s)) {
                        chunks.push_back(keywords[std::uniform_int_distribution<std::size_t>(0, keywords.size() - 1)(rng)]);
                    }
                    std::vector<bool> decoy_on(decoys.size());
                    for (std::size_t j = 0; j < decoys.size(); ++j) {
                        decoy_on[j] = coin(rng, decoy_rate[j]);
                        if (decoy_on[j]) chunks.push_back(decoys[j]);
                    }
                    for (const auto& [j, near] : decoy_near) {
                        if (coin(rng, decoy_on[j] ? 0.5 : 0.005)) chunks.push_back(near);
                    }
                    emit(m, country[d], chunks);
                }
            }
            for (const auto& ctry : countries) {
                for (std::size_t k = 0; k < spec.country_articles; ++k) {
                    std::vector<std::string> chunks;
                    for (std::size_t j = 0; j < decoys.size(); ++j) {
                        if (coin(rng, decoy_rate[j])) chunks.push_back(decoys[j]);
                    }
                    emit(m, ctry, chunks);
                }
            }
        }
    }

    {
        std::ofstream news(out.news_frames);
        std::ofstream study(out.study_frames);
        const auto& effects = effect_phrases();
        const std::vector<std::string> triggers = {"caused", "triggered", "because of", "led to",
                                                   "worsened"};
        std::size_t doc = 0;
        const auto causal = [&](std::ostream& os, const std::string& cause, const std::string& provenance) {
            const std::string effect = effects[doc % effects.size()];
            const std::string id = provenance + "-" + std::to_string(doc);
            if (doc % 3 == 0) {
                os << frame_json(id, 0, "Cause_change", {{"cause", cause}, {"effect", "worsening " + effect}}, provenance).dump() << '\n';
            } else {
                os << frame_json(id, 1, "Causation",
                                 {{"cause", cause}, {"trigger", triggers[doc % triggers.size()]}, {"effect", effect}},
                                 provenance).dump() << '\n';
            }
            ++doc;
        };
        std::vector<std::string> seeds;
        for (const auto& f : spec.planted) seeds.push_back(f.ngram);
        for (const auto& c : spec.coverage) seeds.push_back(c);
        for (const auto& d : decoys) seeds.push_back(d);
        for (const auto& s : seeds) {
            causal(news, s, "news");
            causal(news, s, "news");
        }
        for (const auto& f : spec.planted) causal(study, f.ngram, "study");
        // Frames that fail one of the filters.
        news << frame_json("noise-0", 0, "Causation", {{"cause", "stadium lights"}, {"trigger", "caused"}, {"effect", "traffic delays"}}, "news").dump() << '\n';
        news << frame_json("noise-1", 0, "Causation", {{"agent", "parade"}, {"trigger", "caused"}, {"effect", "famine"}}, "news").dump() << '\n';
        news << frame_json("noise-2", 0, "Statement", {{"cause", "gossip"}, {"effect", "hunger"}}, "news").dump() << '\n';
    }

    {
        std::ofstream e(out.embeddings);
        std::vector<std::pair<std::string, std::vector<double>>> vectors;
        const auto planted_centre = random_vector(rng, 10.0);
        const auto decoy_centre = random_vector(rng, 10.0);
        for (const auto& f : spec.planted) {
            for (const auto& tok : text::split(f.ngram)) {
                auto v = around(rng, planted_centre, 0.5);
                vectors.emplace_back(tok, v);
                if (tok == text::split(f.ngram).front()) {
                    for (const auto& near : f.near_terms) vectors.emplace_back(near, around(rng, v, 0.3));
                }
            }
        }
        for (const auto& c : spec.coverage) vectors.emplace_back(c, random_vector(rng, 10.0));
        for (const auto& phrase : effect_phrases()) {
            for (const auto& tok : text::split(phrase)) vectors.emplace_back(tok, random_vector(rng, 10.0));
        }
        vectors.emplace_back("worsening", random_vector(rng, 10.0));
        for (std::size_t j = 0; j < decoys.size(); ++j) {
            auto v = around(rng, decoy_centre, 4.0);
            vectors.emplace_back(decoys[j], v);
            for (const auto& [k, near] : decoy_near) {
                if (k == j) vectors.emplace_back(near, around(rng, v, 0.3));
            }
        }
        for (const auto& f : filler_words()) {
            if (std::none_of(vectors.begin(), vectors.end(), [&](const auto& p) { return p.first == f; })) {
                vectors.emplace_back(f, random_vector(rng, 10.0));
            }
        }
        e << vectors.size() << ' ' << kDim << '\n';
        for (const auto& [word, v] : vectors) {
            e << word;
            for (double x : v) e << ' ' << csv::format_double(std::round(x * 1e6) / 1e6);
            e << '\n';
        }
    }

    {
        nlohmann::ordered_json g;
        auto planted = nlohmann::ordered_json::array();
        std::vector<std::string> derived;
        for (const auto& f : spec.planted) {
            planted.push_back({{"ngram", f.ngram}, {"lead", f.lead}, {"effect", f.effect}, {"near_terms", f.near_terms}});
            const auto toks = text::split(f.ngram);
            for (std::size_t n = 1; n < toks.size(); ++n) {
                for (std::size_t i = 0; i + n <= toks.size(); ++i) {
                    derived.push_back(text::join(std::span(toks).subspan(i, n)));
                }
            }
            for (const auto& near : f.near_terms) derived.push_back(near);
        }
        std::vector<std::string> coverage = spec.coverage;
        coverage.insert(coverage.end(), crisis_keywords().begin(), crisis_keywords().end());
        std::vector<std::string> decoy_all = decoys;
        for (const auto& [j, near] : decoy_near) decoy_all.push_back(near);
        auto events = nlohmann::ordered_json::array();
        for (const auto& o : truth.outbreaks) {
            events.push_back({{"district_id", o.district_id}, {"period", o.period.str()}, {"severity", o.severity}});
        }
        g["seed"] = seed;
        g["planted"] = planted;
        g["derived"] = derived;
        g["coverage"] = coverage;
        g["decoys"] = decoy_all;
        g["outbreaks"] = events;
        std::ofstream os(out.ground_truth);
        os << g.dump(2) << '\n';
    }

    PipelineConfig config;
    config.paths = {out.corpus, out.news_frames, out.study_frames, out.embeddings,
                    out.gazetteer, out.panel, out.projections, directory / "run"};
    const Month last = spec.first + static_cast<int>(spec.months) - 1;
    config.window = {{spec.first.year(), spec.first.month(), 1},
                     {last.year(), last.month(), days_in_month(last.year(), last.month())}};
    config.seed = seed;
    config.clusters = spec.clusters;
    write_config(out.config, config);
    return out;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open ground truth " + path.string());
    GroundTruth g;
    try {
        const auto j = nlohmann::json::parse(in);
        for (const auto& p : j.at("planted")) {
            g.planted.push_back({p.at("ngram").get<std::string>(), p.at("lead").get<int>(),
                                 p.at("effect").get<double>(),
                                 p.at("near_terms").get<std::vector<std::string>>()});
        }
        g.derived = j.at("derived").get<std::vector<std::string>>();
        g.coverage = j.at("coverage").get<std::vector<std::string>>();
        g.decoys = j.at("decoys").get<std::vector<std::string>>();
        for (const auto& o : j.at("outbreaks")) {
            g.outbreaks.push_back({o.at("district_id").get<std::string>(),
                                   Month::parse(o.at("period").get<std::string>()),
                                   o.at("severity").get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed ground truth " + path.string() + ": " + e.what());
    }
    return g;
}

}  // namespace fewscast::pipeline
