#include "gavs/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace gavs {

SimResult generate(const SimSpec& spec) {
    if (spec.n_main < 1) throw std::invalid_argument("generate: n_main >= 1");
    if (spec.n_samples < 1)
        throw std::invalid_argument("generate: n_samples >= 1");
    if (spec.noise_variance < 0.0)
        throw std::invalid_argument("generate: negative noise variance");
    const PredictorSpace space = PredictorSpace::make(spec.n_main);

    SimSpec echo = spec;
    std::set<TermId> truth(spec.true_terms.begin(), spec.true_terms.end());
    for (TermId t : truth)
        if (t < 1 || t > space.total_terms)
            throw std::invalid_argument("generate: true term " +
                                        std::to_string(t) + " out of range");
    // hierarchy: either complete it or refuse
    for (TermId t : spec.true_terms) {
        for (TermId parent : parents_of(t, space)) {
            if (truth.count(parent)) continue;
            if (!spec.complete_hierarchy)
                throw std::invalid_argument(
                    "generate: true_terms violate strong hierarchy (term " +
                    std::to_string(t) + " lacks parent " +
                    std::to_string(parent) + ")");
            truth.insert(parent);
        }
    }
    echo.true_terms.assign(truth.begin(), truth.end());

    Rng rng(spec.rng_seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_variance));

    Dataset ds;
    ds.mains.resize(spec.n_samples, spec.n_main);
    for (int r = 0; r < spec.n_samples; ++r)
        for (int c = 0; c < spec.n_main; ++c) ds.mains(r, c) = std_normal(rng);

    ds.response.resize(spec.n_samples);
    int positives = 0;
    for (int r = 0; r < spec.n_samples; ++r) {
        double latent = noise(rng);
        for (TermId t : echo.true_terms) {
            const TermDescriptor d = decode_term(t, space);
            latent += d.is_main()
                          ? ds.mains(r, d.i - 1)
                          : ds.mains(r, d.i - 1) * ds.mains(r, d.j - 1);
        }
        ds.response[r] = latent > spec.threshold ? 1.0 : 0.0;
        positives += ds.response[r] > 0.5;
    }
    for (int c = 0; c < spec.n_main; ++c)
        ds.column_names.push_back("x" + std::to_string(c + 1));
    if (spec.standardize) ds.standardize();

    SimResult result;
    result.dataset = std::move(ds);
    result.spec = std::move(echo);
    result.positive_rate =
        static_cast<double>(positives) / static_cast<double>(spec.n_samples);
    return result;
}

std::vector<TermId> default_true_set(int n_main, int n_true,
                                     double interaction_fraction, Rng& rng) {
    const PredictorSpace space = PredictorSpace::make(n_main);
    if (n_true < 1 || n_true > space.total_terms)
        throw std::invalid_argument("default_true_set: infeasible n_true");
    if (interaction_fraction < 0.0 || interaction_fraction > 1.0)
        throw std::invalid_argument("default_true_set: fraction in [0,1]");

    // split n_true into m mains + t interactions such that the t pairs fit
    // inside the m-main pool and the pool fits in n_main
    int t = static_cast<int>(std::lround(interaction_fraction * n_true));
    auto feasible = [&](int ti) {
        const int m = n_true - ti;
        return m <= n_main && ti <= m * (m - 1) / 2;
    };
    while (t > 0 && !feasible(t)) --t;
    if (!feasible(t))
        throw std::invalid_argument(
            "default_true_set: n_true too large for n_main");
    const int m = n_true - t;

    std::vector<int> pool(n_main);
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(m);
    std::sort(pool.begin(), pool.end());

    std::vector<TermId> terms(pool.begin(), pool.end());
    std::vector<TermId> pairs;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            pairs.push_back(encode_term(
                TermDescriptor::interaction(pool[a], pool[b]), space));
    std::shuffle(pairs.begin(), pairs.end(), rng);
    terms.insert(terms.end(), pairs.begin(), pairs.begin() + t);
    std::sort(terms.begin(), terms.end());
    return terms;
}

}  // namespace gavs
