#pragma once

#include <cstdint>
#include <vector>

#include <qd/types.hpp>

namespace qd {

/// Shared evaluation bookkeeping for a run: the global evaluation counter
/// and the count of evaluations whose raw descriptor fell outside the
/// feature box and had to be clamped.
struct EvalContext {
    std::int64_t next_eval_index = 0;
    std::int64_t descriptor_clamp_events = 0;
};

/// Evaluate a batch of genotypes, one Individual per genotype in input order.
///
/// Evaluator calls may run on up to `threads` workers; results, evaluation
/// indices and clamp counts are assembled in input order, so the output is
/// independent of the thread count. Noise draws for noisy objectives come
/// from a per-evaluation stream keyed by the evaluation index.
///
/// Throws EvaluationError if the evaluator returns a non-finite fitness or
/// descriptor component, identifying the offending genotype.
std::vector<Individual> evaluate_batch(const ObjectiveSpec& objective,
                                       const std::vector<Genotype>& genotypes,
                                       EvalContext& ctx,
                                       std::uint64_t seed,
                                       int threads = 1);

}  // namespace qd
