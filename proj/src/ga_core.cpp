#include "gavs/ga_core.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gavs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// splitmix64: independent child seeds from the run seed
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Memoized cross-validated fitness over sorted term sets. Evaluation
/// failures map to the worst possible value and are counted.
class FitnessCache {
  public:
    FitnessCache(const Dataset& dataset, const PredictorSpace& space,
                 const std::vector<int>& folds, const GaConfig& config)
        : dataset_(dataset), space_(space), folds_(folds), config_(config) {}

    double evaluate(const std::vector<TermId>& terms, int* failures) {
        if (auto it = cache_.find(terms); it != cache_.end())
            return it->second;
        const double v = compute(terms, failures);
        cache_.emplace(terms, v);
        return v;
    }

    /// Evaluate any uncached sets among `term_sets`, possibly on worker
    /// threads; completion order cannot matter because results are keyed
    /// by term set.
    void prefetch(const std::vector<std::vector<TermId>>& term_sets,
                  int* failures) {
        std::vector<const std::vector<TermId>*> todo;
        std::map<std::vector<TermId>, bool> seen;
        for (const auto& t : term_sets)
            if (!cache_.count(t) && !seen[t]) {
                seen[t] = true;
                todo.push_back(&t);
            }
        const int jobs = std::max(1, config_.jobs);
        if (jobs == 1 || todo.size() < 2) {
            for (const auto* t : todo) cache_.emplace(*t, compute(*t, failures));
            return;
        }
        std::atomic<std::size_t> next{0};
        std::atomic<int> fail_count{0};
        std::vector<std::pair<const std::vector<TermId>*, double>> results(
            todo.size());
        auto worker = [&] {
            for (std::size_t i = next++; i < todo.size(); i = next++) {
                int f = 0;
                results[i] = {todo[i], compute(*todo[i], &f)};
                fail_count += f;
            }
        };
        std::vector<std::thread> pool;
        const int nthreads =
            std::min<std::size_t>(jobs, todo.size());
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (auto& [terms, v] : results) cache_.emplace(*terms, v);
        if (failures) *failures += fail_count;
    }

  private:
    double compute(const std::vector<TermId>& terms, int* failures) const {
        try {
            const CvFitness cv = cv_fitness(dataset_, terms, space_, folds_,
                                            config_.fitness_metric,
                                            config_.irls_max_iter);
            return cv.mean_value;
        } catch (const std::exception&) {
            if (failures) ++*failures;
            return config_.maximize() ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity();
        }
    }

    const Dataset& dataset_;
    const PredictorSpace& space_;
    const std::vector<int>& folds_;
    const GaConfig& config_;
    std::map<std::vector<TermId>, double> cache_;
};

template <class Chrom>
Chrom make_initial(const GaConfig& config, const PredictorSpace& space,
                   Rng& rng);

template <>
StandardChromosome make_initial(const GaConfig& config,
                                const PredictorSpace& space, Rng& rng) {
    return init_standard(space, config.init_density, config.seed_terms, rng);
}

template <>
IndexedChromosome make_initial(const GaConfig& config,
                               const PredictorSpace& space, Rng& rng) {
    return init_indexed(space, config.max_length_l, config.seed_terms, rng);
}

void notify(const RunHooks& hooks, int gen,
            const std::vector<StandardChromosome>& pop) {
    if (hooks.on_standard_generation) hooks.on_standard_generation(gen, pop);
}
void notify(const RunHooks& hooks, int gen,
            const std::vector<IndexedChromosome>& pop) {
    if (hooks.on_indexed_generation) hooks.on_indexed_generation(gen, pop);
}

template <class Chrom>
RunReport run_impl(const GaConfig& config, const Dataset& dataset,
                   const PredictorSpace& space, const RunHooks& hooks) {
    const auto t0 = Clock::now();
    RunReport report;
    report.config = config;
    report.fold_assignment =
        make_folds(dataset.n_rows(), config.cv_folds, mix_seed(config.rng_seed, 1));

    FitnessCache cache(dataset, space, report.fold_assignment, config);
    Rng rng(mix_seed(config.rng_seed, 2));

    std::vector<Chrom> population;
    population.reserve(config.population_size);
    for (int i = 0; i < config.population_size; ++i)
        population.push_back(make_initial<Chrom>(config, space, rng));

    const bool maximize = config.maximize();
    Chrom best_chrom;
    std::vector<TermId> best_terms;
    double best_fitness =
        maximize ? -std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (int gen = 0; gen <= config.generations; ++gen) {
        const auto gen_t0 = Clock::now();
        GenerationStats stats;
        stats.generation = gen;
        notify(hooks, gen, population);

        std::vector<std::vector<TermId>> term_sets;
        term_sets.reserve(population.size());
        for (const auto& c : population) term_sets.push_back(active_terms(c));
        cache.prefetch(term_sets, &stats.fitness_failures);

        std::vector<double> fitness(population.size());
        double sum = 0.0;
        int best_idx = 0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            fitness[i] = cache.evaluate(term_sets[i], &stats.fitness_failures);
            sum += fitness[i];
            if (better_fitness(fitness[i], fitness[best_idx], maximize))
                best_idx = static_cast<int>(i);
            if (!have_best ||
                better_candidate(fitness[i], term_sets[i], best_fitness,
                                 best_terms, maximize)) {
                have_best = true;
                best_fitness = fitness[i];
                best_terms = term_sets[i];
                best_chrom = population[i];
            }
        }
        stats.best_fitness = fitness[best_idx];
        stats.mean_fitness = sum / population.size();
        stats.best_model_size = static_cast<int>(term_sets[best_idx].size());

        if (gen < config.generations)
            population = step_generation(population, fitness, config, space,
                                         rng, stats);
        stats.elapsed_seconds = seconds_since(gen_t0);
        report.history.push_back(stats);
    }

    report.best_chromosome = to_text(best_chrom);
    report.best_terms = best_terms;
    report.best_fitness = best_fitness;
    const Eigen::MatrixXd X = design_matrix(dataset, best_terms, space);
    report.final_fit = fit_logistic(X, dataset.response);
    report.total_seconds = seconds_since(t0);
    return report;
}

}  // namespace

void GaConfig::validate() const {
    if (population_size < 2)
        throw std::invalid_argument("population_size must be >= 2");
    if (generations < 0)
        throw std::invalid_argument("generations must be >= 0");
    if (tournament_size < 1 || tournament_size > population_size)
        throw std::invalid_argument("tournament_size must be in 1..population");
    if (cv_folds < 2) throw std::invalid_argument("cv_folds must be >= 2");
    if (elite_count < 0 || elite_count >= population_size)
        throw std::invalid_argument("elite_count must be < population_size");
    for (double p : {p_crossover, rates.p_mutate, rates.p_add, rates.p_del,
                     init_density})
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("probabilities must be in [0,1]");
    if (encoding == Encoding::indexed && max_length_l < 1)
        throw std::invalid_argument("max_length_l must be >= 1");
}

bool better_fitness(double a, double b, bool maximize) {
    return maximize ? a > b : a < b;
}

bool better_candidate(double fa, const std::vector<TermId>& ta, double fb,
                      const std::vector<TermId>& tb, bool maximize) {
    if (better_fitness(fa, fb, maximize)) return true;
    if (better_fitness(fb, fa, maximize)) return false;
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    return ta < tb;
}

int tournament_select(const std::vector<double>& fitness, bool maximize,
                      int tournament_size, Rng& rng) {
    const int n = static_cast<int>(fitness.size());
    if (n == 0) throw std::invalid_argument("tournament_select: empty pool");
    if (tournament_size < 1 || tournament_size > n)
        throw std::invalid_argument("tournament_select: bad tournament size");
    // partial Fisher-Yates over indices; ties go to the lowest index
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    int winner = -1;
    for (int i = 0; i < tournament_size; ++i) {
        std::uniform_int_distribution<int> d(i, n - 1);
        std::swap(idx[i], idx[d(rng)]);
        const int cand = idx[i];
        if (winner < 0 || better_fitness(fitness[cand], fitness[winner], maximize) ||
            (fitness[cand] == fitness[winner] && cand < winner))
            winner = cand;
    }
    return winner;
}

RunReport run(const GaConfig& config, const Dataset& dataset,
              const RunHooks& hooks) {
    config.validate();
    dataset.validate();
    const double ymean = dataset.response.mean();
    if (ymean <= 0.0 || ymean >= 1.0)
        throw std::invalid_argument(
            "run: degenerate dataset (constant response)");
    if (config.cv_folds > dataset.n_rows())
        throw std::invalid_argument("run: more folds than rows");
    const PredictorSpace space = PredictorSpace::make(dataset.n_main());
    for (TermId t : config.seed_terms)
        if (t < 1 || t > space.total_terms)
            throw std::invalid_argument("run: invalid seed term");

    if (config.encoding == Encoding::standard)
        return run_impl<StandardChromosome>(config, dataset, space, hooks);
    return run_impl<IndexedChromosome>(config, dataset, space, hooks);
}

}  // namespace gavs
