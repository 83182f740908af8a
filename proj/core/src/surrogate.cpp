#include <qd/surrogate.hpp>

#include <qd/evaluate.hpp>
#include <qd/metrics.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qd {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double ucb(const GpModel& model, const Genotype& x, double beta) {
    if (beta < 0.0) throw std::invalid_argument("ucb: beta must be >= 0");
    const auto [mu, sigma] = model.predict(x);
    return mu + beta * sigma;
}

double expected_improvement(const GpModel& model, const Genotype& x, double incumbent) {
    const auto [mu, sigma] = model.predict(x);
    if (sigma <= 0.0) return std::max(0.0, mu - incumbent);
    const double z = (mu - incumbent) / sigma;
    return std::max(0.0, (mu - incumbent) * normal_cdf(z) + sigma * normal_pdf(z));
}

double default_empty_incumbent(const std::vector<double>& observed_fitness) {
    if (observed_fitness.empty())
        throw std::invalid_argument("default_empty_incumbent: no observations");
    double mean = 0.0, min_f = observed_fitness.front();
    for (double f : observed_fitness) {
        mean += f;
        min_f = std::min(min_f, f);
    }
    mean /= static_cast<double>(observed_fitness.size());
    double var = 0.0;
    for (double f : observed_fitness) var += (f - mean) * (f - mean);
    const double stddev = observed_fitness.size() > 1
                              ? std::sqrt(var / static_cast<double>(observed_fitness.size() - 1))
                              : 0.0;
    return min_f - stddev;
}

double ejie(const GpModel& fitness_model, const std::vector<GpModel>& descriptor_models,
            const Genotype& x, const GridSpec& grid,
            const std::map<std::uint64_t, double>& cell_incumbents, double empty_incumbent) {
    if (descriptor_models.size() != grid.dim())
        throw std::invalid_argument("ejie: need one descriptor model per grid dimension");

    std::vector<std::pair<double, double>> posterior(grid.dim());
    for (std::size_t d = 0; d < grid.dim(); ++d) posterior[d] = descriptor_models[d].predict(x);

    const std::uint64_t cells = grid_cell_count(grid);
    double total = 0.0;
    for (std::uint64_t linear = 0; linear < cells; ++linear) {
        const auto cell = grid_delinearize(linear, grid);
        const Bounds box = grid_cell_box(cell, grid);
        double membership = 1.0;
        for (std::size_t d = 0; d < grid.dim() && membership > 0.0; ++d) {
            const auto [mu, sigma] = posterior[d];
            if (sigma > 0.0) {
                membership *= normal_cdf((box.hi(d) - mu) / sigma) - normal_cdf((box.lo(d) - mu) / sigma);
            } else {
                // point mass: in the box, closing the top edge of the last bin
                const bool top = cell[d] == grid.bins[d] - 1;
                const bool in = mu >= box.lo(d) && (top ? mu <= box.hi(d) : mu < box.hi(d));
                membership *= in ? 1.0 : 0.0;
            }
        }
        if (membership <= 0.0) continue;
        const auto it = cell_incumbents.find(linear);
        const double incumbent = it == cell_incumbents.end() ? empty_incumbent : it->second;
        total += membership * expected_improvement(fitness_model, x, incumbent);
    }
    return total;
}

AcquisitionMap build_acquisition_map(const GpModel& fitness_model,
                                     const std::function<Descriptor(const Genotype&)>& descriptor_fn,
                                     const std::vector<GpModel>* descriptor_models,
                                     const Bounds& genotype_bounds,
                                     const AcquisitionMapConfig& config) {
    config.grid.validate();
    if (!descriptor_fn && !descriptor_models)
        throw std::invalid_argument("build_acquisition_map: need a descriptor source");

    ObjectiveSpec cheap;
    cheap.name = "ucb";
    cheap.genotype_bounds = genotype_bounds;
    cheap.descriptor_bounds = config.grid.bounds;
    const GpModel* model = &fitness_model;
    const double beta = config.beta;
    if (descriptor_models) {
        const std::vector<GpModel>* dm = descriptor_models;
        cheap.evaluator = [model, beta, dm](const Genotype& g, RngStream&) {
            Descriptor b(dm->size());
            for (std::size_t d = 0; d < dm->size(); ++d) b[d] = (*dm)[d].predict(g).first;
            return std::make_pair(ucb(*model, g, beta), std::move(b));
        };
    } else {
        cheap.evaluator = [model, beta, descriptor_fn](const Genotype& g, RngStream&) {
            return std::make_pair(ucb(*model, g, beta), descriptor_fn(g));
        };
    }

    AcquisitionMap out;
    if (config.iterations >= 1) {
        RunConfig run;
        run.objective = cheap;
        run.container.kind = ContainerKind::Grid;
        run.container.grid_bins = config.grid.bins;
        run.selector.kind = SelectorKind::Uniform;
        run.variation = config.variation;
        run.init_count = config.init_count;
        run.iterations = config.iterations;
        run.batch_size = config.batch_size;
        run.seed = config.seed;
        run.metrics_every = config.iterations;  // one final record is enough
        RunResult result = qd_run(run);
        out.ucb_evaluations = result.total_evaluations;
        auto* grid = dynamic_cast<GridContainer*>(result.container.get());
        result.container.release();
        out.grid.reset(grid);
    } else {
        // budget of zero beyond initialization: keep only the random design
        out.grid = std::make_unique<GridContainer>(config.grid);
        EvalContext ctx;
        RngStream init_rng(config.seed, StreamPurpose::Init);
        RngStream add_rng(config.seed, StreamPurpose::ContainerAdd);
        std::vector<Genotype> genotypes(static_cast<std::size_t>(config.init_count),
                                        Genotype(genotype_bounds.size()));
        for (auto& g : genotypes)
            for (std::size_t j = 0; j < genotype_bounds.size(); ++j)
                g[j] = init_rng.uniform(genotype_bounds.lo(j), genotype_bounds.hi(j));
        for (const auto& ind : evaluate_batch(cheap, genotypes, ctx, config.seed))
            out.grid->add(ind, add_rng);
        out.ucb_evaluations = ctx.next_eval_index;
    }
    return out;
}

void SailConfig::validate() const {
    grid.validate();
    if (init_samples < 1) throw std::invalid_argument("SailConfig: init_samples must be >= 1");
    if (total_budget < init_samples)
        throw std::invalid_argument("SailConfig: total_budget must cover the initial design");
    if (batch_per_round < 1) throw std::invalid_argument("SailConfig: batch_per_round must be >= 1");
    if (beta < 0.0) throw std::invalid_argument("SailConfig: beta must be >= 0");
}

SailResult sail(const ObjectiveSpec& objective, const SailConfig& config) {
    objective.validate();
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    SailResult result;
    result.archive = std::make_unique<GridContainer>(config.grid);
    EvalContext ctx;
    RngStream design_rng(config.seed, StreamPurpose::Init);
    RngStream add_rng(config.seed, StreamPurpose::ContainerAdd);
    RngStream pick_rng(config.seed, StreamPurpose::SurrogatePick);

    std::vector<Genotype> inputs;
    std::vector<double> targets;
    std::vector<Descriptor> descriptors;
    std::set<Genotype> seen;

    auto evaluate_true = [&](const std::vector<Genotype>& batch) {
        auto evaluated = evaluate_batch(objective, batch, ctx, config.seed, config.threads);
        for (const auto& ind : evaluated) {
            result.archive->add(ind, add_rng);
            inputs.push_back(ind.genotype);
            targets.push_back(ind.fitness);
            descriptors.push_back(ind.descriptor);
            seen.insert(ind.genotype);
        }
    };

    auto log_round = [&](int round, double map_coverage) {
        SailRoundRecord rec;
        rec.round = round;
        rec.map_coverage = map_coverage;
        rec.archive = collect_metrics(*result.archive, round, ctx.next_eval_index,
                                      objective.fitness_lower_bound);
        result.rounds.push_back(rec);
    };

    std::vector<Genotype> design(static_cast<std::size_t>(config.init_samples),
                                 Genotype(objective.genotype_dim()));
    for (auto& g : design)
        for (std::size_t j = 0; j < objective.genotype_dim(); ++j)
            g[j] = design_rng.uniform(objective.genotype_bounds.lo(j), objective.genotype_bounds.hi(j));
    evaluate_true(design);
    log_round(0, 0.0);

    // The true descriptor is a cheap, known function of the genotype here;
    // only the fitness side of the objective is treated as expensive.
    auto descriptor_fn = [&objective](const Genotype& g) {
        RngStream unused(0, StreamPurpose::Generic);
        return objective.evaluator(g, unused).second;
    };

    int round = 0;
    while (ctx.next_eval_index < config.total_budget) {
        ++round;
        GpModel fitness_model = GpModel::fit(inputs, targets, config.gp);

        std::vector<GpModel> descriptor_models;
        if (config.descriptor_from_gp) {
            for (std::size_t d = 0; d < objective.descriptor_dim(); ++d) {
                std::vector<double> column(descriptors.size());
                for (std::size_t i = 0; i < descriptors.size(); ++i) column[i] = descriptors[i][d];
                descriptor_models.push_back(GpModel::fit(inputs, column, config.gp));
            }
        }

        AcquisitionMapConfig inner = config.inner;
        inner.grid = config.grid;
        inner.beta = config.beta;
        inner.seed = RngStream(config.seed, StreamPurpose::SurrogateInner,
                               static_cast<std::uint64_t>(round))
                         .next_u64();
        AcquisitionMap map = build_acquisition_map(
            fitness_model, descriptor_fn,
            config.descriptor_from_gp ? &descriptor_models : nullptr, objective.genotype_bounds,
            inner);

        // uniform draw over the acquisition map's cells, skipping genotypes
        // already spent on the true objective
        auto cells = map.grid->elites();
        std::vector<std::size_t> order(cells.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[pick_rng.uniform_index(i)]);

        const std::int64_t want =
            std::min<std::int64_t>(config.batch_per_round, config.total_budget - ctx.next_eval_index);
        std::vector<Genotype> batch;
        for (std::size_t i = 0; i < order.size() && batch.size() < static_cast<std::size_t>(want); ++i) {
            const Genotype& g = cells[order[i]].individual->genotype;
            if (!seen.count(g)) batch.push_back(g);
        }
        while (batch.size() < static_cast<std::size_t>(want)) {
            // acquisition map exhausted (tiny maps / heavy duplication):
            // fall back to fresh uniform candidates so the budget is spent
            Genotype g(objective.genotype_dim());
            for (std::size_t j = 0; j < g.size(); ++j)
                g[j] = pick_rng.uniform(objective.genotype_bounds.lo(j),
                                        objective.genotype_bounds.hi(j));
            if (!seen.count(g)) batch.push_back(g);
        }

        evaluate_true(batch);
        const double map_cov = coverage(*map.grid).value_or(0.0);
        log_round(round, map_cov);
    }

    result.total_evaluations = ctx.next_eval_index;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

void export_sail_rounds_csv(const std::vector<SailRoundRecord>& rounds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "round,true_evals,map_coverage,qd_score,qd_score_offset\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rounds)
        out << r.round << ',' << r.archive.evaluations << ',' << num(r.map_coverage) << ','
            << num(r.archive.qd_score) << ',' << num(r.archive.qd_score_offset) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace qd
