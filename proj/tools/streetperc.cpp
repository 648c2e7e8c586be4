#include <streetperc/cli/runner.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using streetperc::cli::Experiment;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    unsigned workers = streetperc::default_workers();
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "experiment configuration file (key = value lines)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "override the configured seed");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

int run(Experiment e, const Common& c) {
    auto cfg = streetperc::cli::load_config(c.config, e);
    if (c.seed) cfg.seed = *c.seed;
    if (c.out) cfg.out = *c.out;
    const auto report = streetperc::cli::run_experiment(cfg, c.workers);
    std::cerr << "simulated " << report.simulated << " runs, reused " << report.reused << "; wrote "
              << report.files.size() << " files to " << cfg.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percolation experiments for device-to-device networks on random street systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("streetperc ") + streetperc::kVersion);

    const std::pair<const char*, Experiment> experiments[] = {
        {"threshold", Experiment::Threshold},
        {"crossing-curves", Experiment::CrossingCurves},
        {"theta", Experiment::Theta},
        {"stretch", Experiment::Stretch},
        {"table1", Experiment::Table1},
    };
    const char* help[] = {
        "estimate the critical intensity from crossing probabilities",
        "crossing-probability curves for several window sizes",
        "percolation probability from stored or new placement runs",
        "stretch factor of the wrapping component",
        "critical intensities for a list of r*gamma values, both street models",
    };
    Common common[5];
    CLI::App* subs[5];
    for (int k = 0; k < 5; ++k) {
        subs[k] = app.add_subcommand(experiments[k].first, help[k]);
        add_common(subs[k], common[k], true);
    }
    std::string replot_dir;
    auto* replot = app.add_subcommand("replot", "regenerate SVG plots of an output directory from its CSV files");
    replot->add_option("--out", replot_dir, "output directory holding manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (replot->parsed()) {
            streetperc::cli::replot(replot_dir);
            return 0;
        }
        for (int k = 0; k < 5; ++k)
            if (subs[k]->parsed()) return run(experiments[k].second, common[k]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
