#include <doctest.h>

#include <cmath>
#include <set>

#include "gavs/datagen.hpp"

using namespace gavs;

TEST_CASE("generate: single main effect tail probability") {
    SimSpec spec;
    spec.n_main = 3;
    spec.n_samples = 100000;
    spec.true_terms = {1};
    spec.noise_variance = 1e-8;  // negligible noise
    spec.rng_seed = 4;
    spec.standardize = false;
    const auto result = generate(spec);
    // P(N(0,1) > 2) = 1 - Phi(2)
    const double p = 1.0 - 0.5 * std::erfc(-2.0 / std::sqrt(2.0));
    const double sigma = std::sqrt(p * (1 - p) / spec.n_samples);
    CHECK(std::abs(result.positive_rate - p) < 3 * sigma);
    CHECK(result.positive_rate ==
          doctest::Approx(result.dataset.response.mean()));
}

TEST_CASE("generate: very negative threshold -> all ones") {
    SimSpec spec;
    spec.n_main = 2;
    spec.n_samples = 500;
    spec.true_terms = {1, 2};
    spec.threshold = -1e9;
    spec.rng_seed = 8;
    const auto result = generate(spec);
    CHECK(result.positive_rate == 1.0);
}

TEST_CASE("generate: latent distribution matches a direct Monte Carlo") {
    // three true terms: mains 1, 2 and their interaction
    const auto space = PredictorSpace::make(4);
    const TermId i12 = encode_term(TermDescriptor::interaction(1, 2), space);
    SimSpec spec;
    spec.n_main = 4;
    spec.n_samples = 100000;
    spec.true_terms = {1, 2, i12};
    spec.rng_seed = 15;
    spec.standardize = false;
    const auto result = generate(spec);
    // independent simulation of the same latent sum
    Rng rng(999);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_variance));
    const int mc = 1000000;
    int pos = 0;
    for (int i = 0; i < mc; ++i) {
        const double a = nd(rng), b = nd(rng);
        pos += (a + b + a * b + noise(rng)) > 2.0;
    }
    const double p = static_cast<double>(pos) / mc;
    const double sigma =
        std::sqrt(p * (1 - p) * (1.0 / spec.n_samples + 1.0 / mc));
    CHECK(std::abs(result.positive_rate - p) < 3 * sigma);
}

TEST_CASE("generate: hierarchy enforcement") {
    const auto space = PredictorSpace::make(4);
    const TermId i12 = encode_term(TermDescriptor::interaction(1, 2), space);
    SimSpec spec;
    spec.n_main = 4;
    spec.n_samples = 10;
    spec.true_terms = {i12};
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
    spec.complete_hierarchy = true;
    const auto result = generate(spec);
    CHECK(result.spec.true_terms == std::vector<TermId>{1, 2, i12});
}

TEST_CASE("generate: determinism per seed, distinct across seeds") {
    SimSpec spec;
    spec.n_main = 3;
    spec.n_samples = 50;
    spec.true_terms = {1};
    spec.rng_seed = 77;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.dataset.mains == b.dataset.mains);
    CHECK(a.dataset.response == b.dataset.response);
    spec.rng_seed = 78;
    const auto c = generate(spec);
    CHECK(a.dataset.mains != c.dataset.mains);
}

TEST_CASE("generate: main-effect column moments") {
    SimSpec spec;
    spec.n_main = 5;
    spec.n_samples = 1000;
    spec.true_terms = {1};
    spec.rng_seed = 21;
    spec.standardize = false;
    const auto result = generate(spec);
    const double se_mean = 1.0 / std::sqrt(1000.0);
    const double se_sd = 1.0 / std::sqrt(2.0 * 999.0);
    for (int c = 0; c < 5; ++c) {
        const auto col = result.dataset.mains.col(c);
        const double mean = col.mean();
        const double sd =
            std::sqrt((col.array() - mean).square().sum() / 999.0);
        CHECK(std::abs(mean) < 3 * se_mean);
        CHECK(std::abs(sd - 1.0) < 3 * se_sd);
    }
}

TEST_CASE("default_true_set") {
    Rng rng(5);
    SUBCASE("n_true = 1 -> a single main effect") {
        const auto s = default_true_set(10, 1, 0.4, rng);
        REQUIRE(s.size() == 1);
        CHECK(s[0] <= 10);
    }
    SUBCASE("n_main = 5, n_true = 3 -> hierarchical 3-set") {
        const auto space = PredictorSpace::make(5);
        for (int trial = 0; trial < 50; ++trial) {
            const auto s = default_true_set(5, 3, 0.4, rng);
            REQUIRE(s.size() == 3);
            std::set<TermId> terms(s.begin(), s.end());
            for (TermId t : s)
                for (TermId p : parents_of(t, space))
                    REQUIRE(terms.count(p));
        }
    }
    SUBCASE("interaction_fraction 0 -> all mains") {
        const auto s = default_true_set(12, 6, 0.0, rng);
        for (TermId t : s) CHECK(t <= 12);
    }
    SUBCASE("paper grid sizes are feasible and hierarchical") {
        const int n[] = {5, 20, 30, 40, 50};
        const int k[] = {3, 19, 28, 35, 45};
        for (int i = 0; i < 5; ++i) {
            const auto space = PredictorSpace::make(n[i]);
            const auto s = default_true_set(n[i], k[i], 0.4, rng);
            REQUIRE(static_cast<int>(s.size()) == k[i]);
            std::set<TermId> terms(s.begin(), s.end());
            REQUIRE(terms.size() == s.size());
            for (TermId t : s)
                for (TermId p : parents_of(t, space))
                    REQUIRE(terms.count(p));
        }
    }
    SUBCASE("infeasible request rejected") {
        CHECK_THROWS_AS(default_true_set(2, 5, 0.4, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("true term set beats random same-size competitors") {
    const auto space = PredictorSpace::make(5);
    Rng rng(33);
    const auto truth = default_true_set(5, 3, 0.4, rng);
    SimSpec spec;
    spec.n_main = 5;
    spec.n_samples = 600;
    spec.true_terms = truth;
    spec.rng_seed = 12;
    const auto result = generate(spec);
    const auto folds = make_folds(600, 5, 3);
    const double true_auc =
        cv_fitness(result.dataset, result.spec.true_terms, space, folds,
                   Metric::cv_auc)
            .mean_value;
    int evaluated = 0, beaten = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<TermId> competitor;
        std::set<TermId> seen;
        std::uniform_int_distribution<int> pick(1, space.total_terms);
        while (competitor.size() < truth.size()) {
            const TermId t = pick(rng);
            if (seen.insert(t).second) competitor.push_back(t);
        }
        if (std::set<TermId>(competitor.begin(), competitor.end()) ==
            std::set<TermId>(truth.begin(), truth.end()))
            continue;
        const double comp_auc =
            cv_fitness(result.dataset, competitor, space, folds,
                       Metric::cv_auc)
                .mean_value;
        ++evaluated;
        if (true_auc > comp_auc) ++beaten;
    }
    CHECK(evaluated > 0);
    CHECK(beaten == evaluated);
}
