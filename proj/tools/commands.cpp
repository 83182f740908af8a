#include "commands.hpp"

#include "config.hpp"

#include <qd/archive_io.hpp>
#include <qd/engine.hpp>
#include <qd/surrogate.hpp>
#include <qd/tasks.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

namespace qd::cli {

namespace {

namespace fs = std::filesystem;

ObjectiveSpec objective_from(const ExperimentFile& file) {
    const auto name = file.require_string("objective", "name");
    auto base = make_objective_by_name(name, static_cast<int>(file.get_int("objective", "arm_joints")),
                                       static_cast<int>(file.get_int("objective", "illum_dim")));
    const double sigma_f = file.get_double("objective", "noise_fitness");
    const double sigma_b = file.get_double("objective", "noise_descriptor");
    return (sigma_f > 0.0 || sigma_b > 0.0) ? noisy_wrapper(base, sigma_f, sigma_b) : base;
}

ContainerConfig container_from(const ExperimentFile& file) {
    ContainerConfig config;
    const auto kind = file.get_string("container", "kind");
    if (kind == "grid")
        config.kind = ContainerKind::Grid;
    else if (kind == "cvt")
        config.kind = ContainerKind::Cvt;
    else if (kind == "distance")
        config.kind = ContainerKind::Distance;
    else if (kind == "deepgrid")
        config.kind = ContainerKind::DeepGrid;
    else
        throw ConfigError("[container].kind: unknown kind `" + kind + "`");
    config.grid_bins = file.get_int_list("container", "grid_bins");
    config.cvt_cells = static_cast<int>(file.get_int("container", "cvt_cells"));
    config.cvt_samples = file.get_uint("container", "cvt_samples");
    config.cvt_seed = file.get_uint("container", "cvt_seed");
    config.cvt_cache_dir = file.get_string("container", "cvt_cache_dir");
    config.distance_threshold = file.get_double("container", "distance_threshold");
    config.depth = static_cast<int>(file.get_int("container", "depth"));
    return config;
}

SelectorConfig selector_from(const ExperimentFile& file) {
    SelectorConfig config;
    const auto kind = file.get_string("selector", "kind");
    if (kind == "uniform")
        config.kind = SelectorKind::Uniform;
    else if (kind == "weighted")
        config.kind = SelectorKind::Weighted;
    else if (kind == "random-genotype")
        config.kind = SelectorKind::RandomGenotype;
    else if (kind == "cell-rank")
        config.kind = SelectorKind::DeepGridRank;
    else
        throw ConfigError("[selector].kind: unknown kind `" + kind + "`");
    const auto score = file.get_string("selector", "score");
    if (score == "curiosity")
        config.score = ScoreKind::Curiosity;
    else if (score == "novelty")
        config.score = ScoreKind::Novelty;
    else if (score == "fitness")
        config.score = ScoreKind::Fitness;
    else if (score == "inverse-count")
        config.score = ScoreKind::InverseCount;
    else
        throw ConfigError("[selector].score: unknown score `" + score + "`");
    return config;
}

VariationConfig variation_from(const ExperimentFile& file) {
    VariationConfig config;
    const auto sigma1 = file.get_string("variation", "sigma1");
    config.sigma1 = sigma1 == "auto" ? -1.0 : file.get_double("variation", "sigma1");
    config.sigma2 = file.get_double("variation", "sigma2");
    config.mix_iso = file.get_double("variation", "mix_iso");
    config.mix_directional = file.get_double("variation", "mix_directional");
    config.mix_blend = file.get_double("variation", "mix_blend");
    return config;
}

RunConfig run_config_from(const ExperimentFile& file) {
    RunConfig config;
    config.objective = objective_from(file);
    config.container = container_from(file);
    config.selector = selector_from(file);
    config.variation = variation_from(file);
    config.init_count = file.get_int("engine", "init");
    config.iterations = file.get_int("engine", "iterations");
    config.batch_size = file.get_int("engine", "batch");
    config.seed = file.get_uint("engine", "seed");
    config.metrics_every = static_cast<int>(file.get_int("engine", "metrics_every"));
    config.novelty_k = static_cast<int>(file.get_int("engine", "novelty_k"));
    config.novelty_refresh_every =
        static_cast<int>(file.get_int("engine", "novelty_refresh_every"));
    config.knn_k = static_cast<int>(file.get_int("engine", "knn_k"));
    config.curiosity.reward = file.get_double("engine", "curiosity_reward");
    config.curiosity.penalty = file.get_double("engine", "curiosity_penalty");
    config.curiosity.floor = file.get_double("engine", "curiosity_floor");
    config.select_from_previous_batch = file.get_bool("selector", "include_previous_batch");
    config.checkpoint_every = static_cast<int>(file.get_int("engine", "checkpoint_every"));
    config.threads = static_cast<int>(file.get_int("engine", "threads"));
    return config;
}

SailConfig sail_config_from(const ExperimentFile& file, const ObjectiveSpec& objective) {
    SailConfig config;
    config.grid =
        GridSpec{file.get_int_list("container", "grid_bins"), objective.descriptor_bounds};
    config.total_budget = file.get_int("surrogate", "budget");
    config.init_samples = file.get_int("surrogate", "init_samples");
    config.batch_per_round = file.get_int("surrogate", "batch_per_round");
    config.beta = file.get_double("surrogate", "beta");
    config.gp.length_scales = file.get_double_list("surrogate", "length_scales");
    config.gp.signal_variance = file.get_double("surrogate", "signal_variance");
    config.gp.noise_variance = file.get_double("surrogate", "noise_variance");
    config.descriptor_from_gp = file.get_bool("surrogate", "descriptor_from_gp");
    config.inner.init_count = file.get_int("surrogate", "inner_init");
    config.inner.iterations = file.get_int("surrogate", "inner_iterations");
    config.inner.batch_size = file.get_int("surrogate", "inner_batch");
    config.inner.variation = variation_from(file);
    config.seed = file.get_uint("engine", "seed");
    config.threads = static_cast<int>(file.get_int("engine", "threads"));
    return config;
}

fs::path output_dir_from(const ExperimentFile& file) {
    if (const char* env = std::getenv("QD_OUT_DIR"); env && *env) return fs::path(env);
    return fs::path(file.get_string("output", "dir"));
}

ExperimentFile load_with_overrides(const RunOptions& options) {
    auto file = ExperimentFile::load(options.config_path);
    for (const auto& spec : options.overrides) file.apply_override(spec);
    return file;
}

void maybe_render(const Container& container, bool want_heatmap, const fs::path& dir) {
    const auto* grid = dynamic_cast<const GridContainer*>(&container);
    if (want_heatmap && grid && grid->spec().dim() == 2)
        render_heatmap(*grid, (dir / "heatmap.ppm").string());
}

int run_qd_mode(const ExperimentFile& file, const fs::path& out_dir) {
    RunConfig config = run_config_from(file);
    // centroids are cached and reloaded between runs unless told otherwise
    if (config.container.kind == ContainerKind::Cvt && config.container.cvt_cache_dir.empty())
        config.container.cvt_cache_dir = (out_dir / "cvt_cache").string();
    if (config.checkpoint_every > 0 && config.checkpoint_dir.empty())
        config.checkpoint_dir = (out_dir / "checkpoints").string();

    const RunResult result = qd_run(config);
    export_archive_csv(*result.container, (out_dir / "archive.csv").string());
    export_metrics_csv(result.metrics, (out_dir / "metrics.csv").string());
    maybe_render(*result.container, file.get_bool("output", "heatmap"), out_dir);

    const auto& final_record = result.metrics.back();
    std::printf("evaluations: %lld\n", static_cast<long long>(result.total_evaluations));
    if (final_record.coverage)
        std::printf("coverage: %.6f\n", *final_record.coverage);
    else
        std::printf("entries: %lld\n", static_cast<long long>(final_record.entries));
    std::printf("qd_score: %.9g\nqd_score_offset: %.9g\n", final_record.qd_score,
                final_record.qd_score_offset);
    return kExitOk;
}

int run_sail_mode(const ExperimentFile& file, const fs::path& out_dir) {
    const ObjectiveSpec objective = objective_from(file);
    const SailConfig config = sail_config_from(file, objective);
    const SailResult result = sail(objective, config);

    export_archive_csv(*result.archive, (out_dir / "archive.csv").string());
    export_sail_rounds_csv(result.rounds, (out_dir / "sail_rounds.csv").string());
    std::vector<MetricsRecord> metrics;
    for (const auto& r : result.rounds) metrics.push_back(r.archive);
    export_metrics_csv(metrics, (out_dir / "metrics.csv").string());
    maybe_render(*result.archive, file.get_bool("output", "heatmap"), out_dir);

    const auto& last = result.rounds.back().archive;
    std::printf("evaluations: %lld\n", static_cast<long long>(result.total_evaluations));
    std::printf("coverage: %.6f\n", last.coverage.value_or(0.0));
    std::printf("qd_score: %.9g\nqd_score_offset: %.9g\n", last.qd_score, last.qd_score_offset);
    return kExitOk;
}

}  // namespace

int cmd_run(const RunOptions& options) {
    try {
        const auto file = load_with_overrides(options);
        const auto out_dir = output_dir_from(file);
        fs::create_directories(out_dir);
        const auto mode = file.get_string("engine", "mode");
        if (mode == "qd") return run_qd_mode(file, out_dir);
        if (mode == "sail") return run_sail_mode(file, out_dir);
        throw ConfigError("[engine].mode: unknown mode `" + mode + "`");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        // invalid run parameters surface here from config validation
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_oracle(const RunOptions& options) {
    try {
        const auto file = load_with_overrides(options);
        const auto out_dir = output_dir_from(file);
        fs::create_directories(out_dir);

        const ObjectiveSpec objective = objective_from(file);
        if (!file.has("oracle", "lattice"))
            throw ConfigError(options.config_path + ": missing required key `lattice` in [oracle]");
        LatticeSpec lattice{file.get_int_list("oracle", "lattice")};

        auto container = make_container(container_from(file), objective.descriptor_bounds);
        exhaustive_oracle(objective, lattice, *container, file.get_uint("engine", "seed"));
        export_archive_csv(*container, (out_dir / "oracle_archive.csv").string());
        std::printf("oracle cells: %zu\n", container->size());

        const auto compare_path = file.get_string("oracle", "compare");
        if (!compare_path.empty()) {
            const auto run_csv = read_archive_csv(compare_path);
            std::map<std::uint64_t, double> run_best;
            for (const auto& row : run_csv.rows) {
                auto it = run_best.find(row.cell_id);
                if (it == run_best.end() || row.fitness > it->second)
                    run_best[row.cell_id] = row.fitness;
            }
            int gaps = 0;
            for (const auto& e : container->elites()) {
                const auto it = run_best.find(e.key);
                if (it == run_best.end()) {
                    std::printf("cell %llu: missing from the run archive (oracle %.9g)\n",
                                static_cast<unsigned long long>(e.key), e.individual->fitness);
                    ++gaps;
                } else if (it->second < e.individual->fitness) {
                    std::printf("cell %llu: run %.9g < oracle %.9g (gap %.9g)\n",
                                static_cast<unsigned long long>(e.key), it->second,
                                e.individual->fitness, e.individual->fitness - it->second);
                    ++gaps;
                }
            }
            std::printf("cells below the oracle: %d of %zu\n", gaps, container->size());
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_render(const std::string& csv_path, const std::vector<int>& bins,
               const std::string& out_path) {
    try {
        const auto csv = read_archive_csv(csv_path);
        render_heatmap_from_rows(csv.rows, bins, out_path);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace qd::cli
