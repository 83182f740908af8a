#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qd: quality-diversity experiment runner"};
    app.require_subcommand(0, 1);

    bool explain = false;
    app.add_flag("--explain", explain, "print every config key with its default and exit");

    std::string run_config;
    std::vector<std::string> run_overrides;
    long long seed = -1;
    int threads = 0;
    auto* run = app.add_subcommand("run", "execute a configured experiment");
    run->add_option("config", run_config, "experiment file (INI)")->required();
    run->add_option("--override,-O", run_overrides, "override a key: section.key=value");
    run->add_option("--seed", seed, "override [engine].seed");
    run->add_option("--threads", threads, "override [engine].threads (1 = serial)");

    std::string oracle_config;
    std::vector<std::string> oracle_overrides;
    auto* oracle = app.add_subcommand("oracle", "exhaustive lattice evaluation and comparison");
    oracle->add_option("config", oracle_config, "experiment file (INI)")->required();
    oracle->add_option("--override,-O", oracle_overrides, "override a key: section.key=value");

    std::string render_csv, render_out = "heatmap.ppm";
    std::vector<int> render_bins;
    auto* render = app.add_subcommand("render", "re-render a heatmap from an archive CSV");
    render->add_option("archive", render_csv, "archive CSV produced by `run`")->required();
    render->add_option("--bins", render_bins, "grid bins, e.g. --bins 64 64")
        ->required()
        ->expected(2);
    render->add_option("--out,-o", render_out, "output PPM path");

    CLI11_PARSE(app, argc, argv);

    if (explain) {
        qd::cli::print_explain(std::cout);
        return qd::cli::kExitOk;
    }

    if (run->parsed()) {
        qd::cli::RunOptions options{run_config, run_overrides};
        if (seed >= 0) options.overrides.push_back("engine.seed=" + std::to_string(seed));
        if (threads > 0) options.overrides.push_back("engine.threads=" + std::to_string(threads));
        return qd::cli::cmd_run(options);
    }
    if (oracle->parsed()) return qd::cli::cmd_oracle({oracle_config, oracle_overrides});
    if (render->parsed()) return qd::cli::cmd_render(render_csv, render_bins, render_out);

    std::cout << app.help();
    return qd::cli::kExitOk;
}
