#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fewscast/common/error.hpp"
#include "fewscast/pipeline/config.hpp"
#include "fewscast/pipeline/pipeline.hpp"
#include "fewscast/pipeline/synthetic.hpp"

namespace fs = std::filesystem;
using namespace fewscast;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string stage;
    bool strict = false;
    bool exclude_target_articles = false;
    bool force = false;
    bool quiet = false;
};

pipeline::PipelineConfig load(const Options& o) {
    if (o.config.empty()) throw ConfigError("--config is required");
    auto c = pipeline::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.strict) c.strict = true;
    if (o.exclude_target_articles) c.exclude_target_articles = true;
    return c;
}

void print_status(const std::vector<pipeline::StageStatus>& statuses) {
    for (const auto& s : statuses) {
        std::cout << pipeline::to_string(s.stage) << ": " << (s.cached ? "cached" : "done");
        if (!s.warnings.empty()) std::cout << " (" << s.warnings.size() << " warnings)";
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"News-based food-crisis early-warning pipeline"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "pipeline configuration (INI)");
    app.add_option("--seed", o.seed, "random seed (overrides the config)");
    app.add_option("--stage", o.stage, "with run: stop after this stage");
    app.add_flag("--strict", o.strict, "treat malformed corpus lines as fatal");
    app.add_flag("--exclude-target-articles", o.exclude_target_articles,
                 "drop articles mentioning a target keyword before computing news factors");
    app.add_flag("--force", o.force, "ignore cached stage outputs");
    app.add_flag("-q,--quiet", o.quiet, "no progress log");

    for (auto stage : pipeline::all_stages()) {
        const std::string name(pipeline::to_string(stage));
        auto* sub = app.add_subcommand(name, "run the " + name + " stage");
        sub->fallthrough();
        sub->callback([&o, stage] {
            pipeline::Pipeline p(load(o), o.quiet ? nullptr : &std::cerr);
            print_status({p.run_stage(stage, o.force)});
        });
    }

    auto* run = app.add_subcommand("run", "run every stage, reusing up-to-date outputs");
    run->fallthrough();
    run->callback([&o] {
        std::optional<pipeline::Stage> until;
        if (!o.stage.empty()) until = pipeline::parse_stage(o.stage);
        pipeline::Pipeline p(load(o), o.quiet ? nullptr : &std::cerr);
        print_status(p.run(until, o.force));
    });

    std::string synth_out = "synthetic";
    pipeline::SyntheticSpec spec;
    auto* synth = app.add_subcommand("synth", "write a synthetic input set with ground truth and config");
    synth->fallthrough();
    synth->add_option("-o,--out", synth_out, "output directory");
    synth->add_option("--districts", spec.districts, "number of districts");
    synth->add_option("--months", spec.months, "number of months");
    synth->add_option("--decoys", spec.decoys, "number of decoy features");
    synth->add_option("--articles", spec.articles_per_district, "articles per district and month");
    synth->add_option("--indicator-noise", spec.indicator_noise, "noise sd of the traditional indicators");
    synth->add_option("--flip-rate", spec.calm_flip_rate, "monthly phase 1/2 flip probability outside crises");
    synth->add_option("--near-share", spec.near_term_share, "chance a near term accompanies its feature");
    double effect = -1.0;
    synth->add_option("--effect", effect, "mention-rate effect of every planted feature");
    synth->callback([&] {
        if (effect >= 0.0) {
            for (auto& p : spec.planted) p.effect = effect;
        }
        const auto out = pipeline::generate_synthetic(spec, o.seed.value_or(42), synth_out);
        std::cout << "wrote " << out.directory.string() << " (config: " << out.config.string() << ")\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::Config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::Data);
    }
    return 0;
}
