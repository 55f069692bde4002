#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gavs/chromosome.hpp"
#include "gavs/model_fitness.hpp"
#include "gavs/predictor_space.hpp"

namespace gavs {

enum class Encoding { standard, indexed };

struct GaConfig {
    Encoding encoding = Encoding::indexed;
    int population_size = 30;
    int generations = 250;
    double p_crossover = 0.5;
    MutationRates rates{1.0, 0.9, 0.3};
    int tournament_size = 2;
    int max_length_l = 50;      // indexed encoding only
    double init_density = 0.5;  // standard encoding only
    Metric fitness_metric = Metric::cv_aic;
    int cv_folds = 10;
    int elite_count = 1;
    std::uint64_t rng_seed = 0;
    std::vector<TermId> seed_terms;
    int irls_max_iter = 25;
    int jobs = 1;

    bool maximize() const { return fitness_metric == Metric::cv_auc; }
    void validate() const;
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    int best_model_size = 0;
    int repair_overflows = 0;
    int mutation_noops = 0;
    int fitness_failures = 0;
    double elapsed_seconds = 0.0;
};

struct RunReport {
    GaConfig config;
    std::string best_chromosome;  // serialized text form
    std::vector<TermId> best_terms;
    double best_fitness = 0.0;
    FitResult final_fit;  // refit of the best term set on the full data
    std::vector<GenerationStats> history;
    std::vector<int> fold_assignment;
    double total_seconds = 0.0;
};

/// a strictly better than b under the metric direction
bool better_fitness(double a, double b, bool maximize);

/// Best-model ordering: fitness first, then smaller model, then
/// lexicographically smaller term set.
bool better_candidate(double fa, const std::vector<TermId>& ta, double fb,
                      const std::vector<TermId>& tb, bool maximize);

/// Index of the best among tournament_size members sampled without
/// replacement; ties go to the lowest index.
int tournament_select(const std::vector<double>& fitness, bool maximize,
                      int tournament_size, Rng& rng);

namespace detail {

inline std::pair<StandardChromosome, StandardChromosome> ga_crossover(
    const StandardChromosome& a, const StandardChromosome& b,
    const PredictorSpace& space, Rng&, RepairLog*) {
    return crossover_standard(a, b, space);
}
inline std::pair<IndexedChromosome, IndexedChromosome> ga_crossover(
    const IndexedChromosome& a, const IndexedChromosome& b,
    const PredictorSpace& space, Rng& rng, RepairLog* log) {
    return crossover_indexed(a, b, space, rng, log);
}
inline StandardChromosome ga_mutate(const StandardChromosome& c,
                                    const MutationRates& rates,
                                    const PredictorSpace& space, Rng& rng,
                                    int*, RepairLog*) {
    return mutate_standard(c, rates, space, rng);
}
inline IndexedChromosome ga_mutate(const IndexedChromosome& c,
                                   const MutationRates& rates,
                                   const PredictorSpace& space, Rng& rng,
                                   int* noops, RepairLog* log) {
    return mutate_indexed(c, rates, space, rng, noops, log);
}

}  // namespace detail

/// One generational update: elites copied unchanged, remaining slots filled
/// pairwise by tournament parents that either cross over (probability
/// p_crossover) or pass through, with mutation applied to every non-elite
/// offspring. Operator counters accumulate into stats.
template <class Chrom>
std::vector<Chrom> step_generation(const std::vector<Chrom>& population,
                                   const std::vector<double>& fitness,
                                   const GaConfig& config,
                                   const PredictorSpace& space, Rng& rng,
                                   GenerationStats& stats) {
    const int pop_size = static_cast<int>(population.size());
    const bool maximize = config.maximize();

    std::vector<int> order(pop_size);
    for (int i = 0; i < pop_size; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return better_fitness(fitness[a], fitness[b], maximize);
    });

    std::vector<Chrom> next;
    next.reserve(pop_size);
    for (int e = 0; e < config.elite_count; ++e)
        next.push_back(population[order[e]]);

    std::bernoulli_distribution cross_coin(config.p_crossover);
    std::bernoulli_distribution fair_coin(0.5);
    while (static_cast<int>(next.size()) < pop_size) {
        const int ia = tournament_select(fitness, maximize,
                                         config.tournament_size, rng);
        const int ib = tournament_select(fitness, maximize,
                                         config.tournament_size, rng);
        Chrom c1 = population[ia], c2 = population[ib];
        if (cross_coin(rng)) {
            RepairLog log;
            auto [x1, x2] = detail::ga_crossover(c1, c2, space, rng, &log);
            stats.repair_overflows += log.overflows;
            c1 = std::move(x1);
            c2 = std::move(x2);
        }
        RepairLog mlog;
        c1 = detail::ga_mutate(c1, config.rates, space, rng,
                               &stats.mutation_noops, &mlog);
        c2 = detail::ga_mutate(c2, config.rates, space, rng,
                               &stats.mutation_noops, &mlog);
        stats.repair_overflows += mlog.overflows;
        if (pop_size - static_cast<int>(next.size()) == 1) {
            next.push_back(fair_coin(rng) ? std::move(c1) : std::move(c2));
        } else {
            next.push_back(std::move(c1));
            next.push_back(std::move(c2));
        }
    }
    return next;
}

struct RunHooks {
    std::function<void(int, const std::vector<StandardChromosome>&)>
        on_standard_generation;
    std::function<void(int, const std::vector<IndexedChromosome>&)>
        on_indexed_generation;
};

RunReport run(const GaConfig& config, const Dataset& dataset,
              const RunHooks& hooks = {});

}  // namespace gavs
