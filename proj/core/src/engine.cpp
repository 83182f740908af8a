#include <qd/engine.hpp>

#include <qd/archive_io.hpp>
#include <qd/cvt.hpp>
#include <qd/evaluate.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qd {

std::unique_ptr<Container> make_container(const ContainerConfig& config,
                                          const Bounds& descriptor_bounds) {
    switch (config.kind) {
        case ContainerKind::Grid:
            return std::make_unique<GridContainer>(GridSpec{config.grid_bins, descriptor_bounds});
        case ContainerKind::DeepGrid:
            return std::make_unique<DeepGridContainer>(GridSpec{config.grid_bins, descriptor_bounds},
                                                       config.depth);
        case ContainerKind::Distance:
            return std::make_unique<DistanceArchive>(config.distance_threshold, descriptor_bounds);
        case ContainerKind::Cvt: {
            std::shared_ptr<const CentroidSet> centroids = config.centroids;
            if (!centroids) {
                if (config.cvt_cells < 1)
                    throw std::invalid_argument("ContainerConfig: cvt_cells must be >= 1");
                const auto k = static_cast<std::size_t>(config.cvt_cells);
                const std::uint64_t samples =
                    config.cvt_samples ? config.cvt_samples : 100ull * static_cast<std::uint64_t>(k);
                centroids = std::make_shared<const CentroidSet>(
                    config.cvt_cache_dir.empty()
                        ? cvt_build_seeded(k, samples, descriptor_bounds, config.cvt_seed)
                        : cvt_build_cached(k, samples, descriptor_bounds, config.cvt_seed,
                                           config.cvt_cache_dir));
                if (centroids->low_sample_warning)
                    std::fprintf(stderr,
                                 "warning: CVT built from %llu samples; %llu (100*k) recommended\n",
                                 static_cast<unsigned long long>(samples),
                                 static_cast<unsigned long long>(100ull * k));
            }
            return std::make_unique<CvtContainer>(std::move(centroids));
        }
    }
    throw std::invalid_argument("make_container: unknown container kind");
}

void RunConfig::validate() const {
    objective.validate();
    if (init_count < 1) throw std::invalid_argument("RunConfig: init_count must be >= 1");
    if (iterations < 1) throw std::invalid_argument("RunConfig: iterations must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("RunConfig: batch_size must be >= 1");
    if (metrics_every < 1) throw std::invalid_argument("RunConfig: metrics_every must be >= 1");
    if (novelty_refresh_every < 1)
        throw std::invalid_argument("RunConfig: novelty_refresh_every must be >= 1");
    if (threads < 1) throw std::invalid_argument("RunConfig: threads must be >= 1");
    if (selector.kind == SelectorKind::DeepGridRank && container.kind != ContainerKind::DeepGrid)
        throw std::invalid_argument("RunConfig: cell-rank selection needs a deep-grid container");
    if (!(curiosity.reward > 0.0) || !(curiosity.penalty > 0.0) || curiosity.floor > 0.0)
        throw std::invalid_argument("RunConfig: curiosity needs reward > 0, penalty > 0, floor <= 0");
    variation.validate();
}

namespace {

std::vector<Genotype> random_genotypes(const Bounds& bounds, std::int64_t count, RngStream& rng) {
    std::vector<Genotype> out(static_cast<std::size_t>(count), Genotype(bounds.size()));
    for (auto& g : out)
        for (std::size_t j = 0; j < bounds.size(); ++j) g[j] = rng.uniform(bounds.lo(j), bounds.hi(j));
    return out;
}

void write_checkpoint(const RunConfig& config, const Container& container, std::int64_t iteration,
                      const EvalContext& ctx) {
    namespace fs = std::filesystem;
    const fs::path dir = config.checkpoint_dir.empty() ? fs::path(".") : fs::path(config.checkpoint_dir);
    fs::create_directories(dir);
    char name[64];
    std::snprintf(name, sizeof(name), "checkpoint_%06lld.csv", static_cast<long long>(iteration));
    export_archive_csv(container, (dir / name).string());
    std::snprintf(name, sizeof(name), "checkpoint_%06lld.state", static_cast<long long>(iteration));
    std::ofstream state(dir / name);
    state << "seed " << config.seed << "\niteration " << iteration << "\nnext_eval_index "
          << ctx.next_eval_index << "\ndescriptor_clamp_events " << ctx.descriptor_clamp_events
          << "\n";
}

}  // namespace

RunResult qd_run(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    auto container = make_container(config.container, config.objective.descriptor_bounds);
    EvalContext ctx;
    RngStream init_rng(config.seed, StreamPurpose::Init);
    RngStream selection_rng(config.seed, StreamPurpose::Selection);
    RngStream add_rng(config.seed, StreamPurpose::ContainerAdd);

    const bool needs_novelty = config.selector.kind == SelectorKind::Weighted &&
                               config.selector.score == ScoreKind::Novelty;

    RunResult result;
    auto record_metrics = [&](std::int64_t iteration) {
        result.metrics.push_back(collect_metrics(*container, iteration, ctx.next_eval_index,
                                                 config.objective.fitness_lower_bound, config.knn_k));
    };

    std::vector<Individual> previous_batch;

    auto run_iteration = [&](std::int64_t iter) {
        std::vector<SelectedParent> parents;
        std::vector<Genotype> offspring;

        if (config.selector.kind == SelectorKind::RandomGenotype) {
            offspring = random_genotypes(config.objective.genotype_bounds, config.batch_size,
                                         selection_rng);
        } else {
            std::vector<const Individual*> extra_pool;
            if (config.select_from_previous_batch)
                for (const Individual& ind : previous_batch) extra_pool.push_back(&ind);

            switch (config.selector.kind) {
                case SelectorKind::Uniform:
                    parents = select_uniform(*container, static_cast<std::size_t>(config.batch_size),
                                             selection_rng, extra_pool);
                    break;
                case SelectorKind::Weighted:
                    parents = select_weighted(*container, config.selector.score,
                                              static_cast<std::size_t>(config.batch_size),
                                              selection_rng, extra_pool);
                    break;
                case SelectorKind::DeepGridRank:
                    parents = select_deepgrid_rank(dynamic_cast<DeepGridContainer&>(*container),
                                                   static_cast<std::size_t>(config.batch_size),
                                                   selection_rng);
                    break;
                default:
                    break;
            }
            std::vector<Genotype> parent_genotypes;
            parent_genotypes.reserve(parents.size());
            for (const auto& p : parents) parent_genotypes.push_back(p.snapshot.genotype);
            offspring = vary(parent_genotypes, config.variation, config.objective.genotype_bounds,
                             config.seed, static_cast<std::uint64_t>(ctx.next_eval_index));
        }

        auto evaluated = evaluate_batch(config.objective, offspring, ctx, config.seed, config.threads);

        // container writes and score updates are serialized in eval order
        for (std::size_t i = 0; i < evaluated.size(); ++i) {
            const bool added = container->add(evaluated[i], add_rng);
            if (i < parents.size()) {
                if (Individual* stored =
                        container->find(parents[i].key, parents[i].snapshot.eval_index))
                    curiosity_update(*stored, added, config.curiosity);
            }
        }

        if (config.select_from_previous_batch) previous_batch = std::move(evaluated);

        if (needs_novelty && iter % config.novelty_refresh_every == 0)
            refresh_novelty(*container, config.novelty_k);
    };

    auto init = evaluate_batch(config.objective, random_genotypes(config.objective.genotype_bounds,
                                                                  config.init_count, init_rng),
                               ctx, config.seed, config.threads);
    for (const auto& ind : init) container->add(ind, add_rng);
    if (config.select_from_previous_batch) previous_batch = std::move(init);
    if (needs_novelty) refresh_novelty(*container, config.novelty_k);
    record_metrics(0);

    for (std::int64_t iter = 1; iter <= config.iterations; ++iter) {
        try {
            run_iteration(iter);
        } catch (const EvaluationError& e) {
            throw EvaluationError("iteration " + std::to_string(iter) + ": " + e.what());
        }
        if (iter % config.metrics_every == 0 || iter == config.iterations) record_metrics(iter);
        if (config.checkpoint_every > 0 && iter % config.checkpoint_every == 0)
            write_checkpoint(config, *container, iter, ctx);
    }

    result.container = std::move(container);
    result.total_evaluations = ctx.next_eval_index;
    result.descriptor_clamp_events = ctx.descriptor_clamp_events;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

RunResult map_elites(const GridSpec& grid, const ObjectiveSpec& objective, std::int64_t init_count,
                     std::int64_t iterations, std::int64_t batch_size, std::uint64_t seed) {
    RunConfig config;
    config.objective = objective;
    config.container.kind = ContainerKind::Grid;
    config.container.grid_bins = grid.bins;
    config.selector.kind = SelectorKind::Uniform;
    config.init_count = init_count;
    config.iterations = iterations;
    config.batch_size = batch_size;
    config.seed = seed;
    return qd_run(config);
}

}  // namespace qd
