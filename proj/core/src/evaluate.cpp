#include <qd/evaluate.hpp>

#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

namespace qd {

namespace {

std::string format_genotype(const Genotype& g) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << g[i];
    os << ")";
    return os.str();
}

struct SlotResult {
    Individual individual;
    std::size_t clamp_moved = 0;
    std::optional<std::string> error;
};

void evaluate_one(const ObjectiveSpec& objective, const Genotype& genotype,
                  std::int64_t eval_index, std::uint64_t seed, SlotResult& out) {
    RngStream noise(seed, StreamPurpose::EvalNoise, static_cast<std::uint64_t>(eval_index));
    auto [fitness, descriptor] = objective.evaluator(genotype, noise);

    bool finite = std::isfinite(fitness);
    for (double v : descriptor) finite = finite && std::isfinite(v);
    if (!finite || descriptor.size() != objective.descriptor_dim()) {
        out.error = "evaluation produced " +
                    std::string(descriptor.size() != objective.descriptor_dim()
                                    ? "a descriptor of wrong dimension"
                                    : "a non-finite value") +
                    " for genotype " + format_genotype(genotype);
        return;
    }

    out.clamp_moved = clamp_to_bounds(descriptor, objective.descriptor_bounds);
    Individual ind;
    ind.genotype = genotype;
    ind.fitness = fitness;
    ind.descriptor = std::move(descriptor);
    ind.eval_index = eval_index;
    out.individual = std::move(ind);
}

}  // namespace

std::vector<Individual> evaluate_batch(const ObjectiveSpec& objective,
                                       const std::vector<Genotype>& genotypes,
                                       EvalContext& ctx, std::uint64_t seed, int threads) {
    objective.validate();
    for (const auto& g : genotypes)
        if (g.size() != objective.genotype_dim())
            throw std::invalid_argument("evaluate_batch: genotype dimension mismatch");

    const std::size_t n = genotypes.size();
    const std::int64_t first_index = ctx.next_eval_index;
    std::vector<SlotResult> slots(n);

    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            evaluate_one(objective, genotypes[i], first_index + static_cast<std::int64_t>(i), seed, slots[i]);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1))
                evaluate_one(objective, genotypes[i], first_index + static_cast<std::int64_t>(i), seed, slots[i]);
        };
        std::vector<std::thread> pool;
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
        pool.reserve(count);
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Counters advance in input order so the outcome matches a serial pass.
    std::vector<Individual> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].error) throw EvaluationError(*slots[i].error);
        ctx.descriptor_clamp_events += static_cast<std::int64_t>(slots[i].clamp_moved > 0 ? 1 : 0);
        out.push_back(std::move(slots[i].individual));
    }
    ctx.next_eval_index += static_cast<std::int64_t>(n);
    return out;
}

}  // namespace qd
