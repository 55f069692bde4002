#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "gavs/model_fitness.hpp"

using namespace gavs;

namespace {

Dataset toy_dataset(int rows, int cols, unsigned seed, double signal = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Dataset ds;
    ds.mains.resize(rows, cols);
    ds.response.resize(rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) ds.mains(r, c) = nd(rng);
        const double eta = signal * ds.mains(r, 0) + 0.5 * nd(rng);
        const double p = 1.0 / (1.0 + std::exp(-eta));
        std::bernoulli_distribution coin(p);
        ds.response[r] = coin(rng) ? 1.0 : 0.0;
    }
    return ds;
}

// O(n^2) pair-counting oracle for the AUC
double auc_brute_force(const std::vector<double>& scores,
                       const std::vector<int>& labels) {
    double wins = 0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

}  // namespace

TEST_CASE("design_matrix") {
    const auto space = PredictorSpace::make(2);
    Dataset ds;
    ds.mains.resize(1, 2);
    ds.mains << 2.0, 3.0;
    ds.response.resize(1);
    ds.response << 1.0;
    SUBCASE("empty term set -> intercept only") {
        const auto X = design_matrix(ds, {}, space);
        CHECK(X.rows() == 1);
        CHECK(X.cols() == 1);
        CHECK(X(0, 0) == 1.0);
    }
    SUBCASE("interaction column is the product of its parents") {
        const TermId i12 =
            encode_term(TermDescriptor::interaction(1, 2), space);
        const auto X = design_matrix(ds, {1, 2, i12}, space);
        CHECK(X(0, 0) == 1.0);
        CHECK(X(0, 1) == 2.0);
        CHECK(X(0, 2) == 3.0);
        CHECK(X(0, 3) == 6.0);
    }
    SUBCASE("empty dataset rejected") {
        Dataset empty;
        CHECK_THROWS(design_matrix(empty, {}, space));
    }
}

TEST_CASE("design_matrix interaction columns over random data") {
    const auto space = PredictorSpace::make(6);
    Dataset ds = toy_dataset(50, 6, 123);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> pick(1, 6);
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const TermId id = encode_term(TermDescriptor::interaction(i, j), space);
        const auto X = design_matrix(ds, {static_cast<TermId>(i),
                                          static_cast<TermId>(j), id},
                                     space);
        for (int r = 0; r < 50; ++r)
            REQUIRE(X(r, 3) ==
                    doctest::Approx(X(r, 1) * X(r, 2)).epsilon(1e-14));
    }
}

TEST_CASE("fit_logistic intercept-only closed form") {
    const int n = 1000;
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 1);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n * 3 / 10; ++i) y[i] = 1.0;
    const auto fit = fit_logistic(X, y);
    CHECK(fit.converged);
    CHECK(fit.coefficients[0] ==
          doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-6));
    CHECK(aic(fit) == doctest::Approx(fit.aic));
}

TEST_CASE("fit_logistic rejects single-class response") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(10, 1);
    CHECK_THROWS_AS(fit_logistic(X, Eigen::VectorXd::Ones(10)),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_logistic(X, Eigen::VectorXd::Zero(10)),
                    std::invalid_argument);
}

TEST_CASE("fit_logistic gradient matches central finite differences") {
    const auto space = PredictorSpace::make(3);
    const Dataset ds = toy_dataset(50, 3, 77);
    const auto X = design_matrix(ds, {1, 2, 3}, space);
    const auto fit = fit_logistic(X, ds.response);
    REQUIRE(fit.converged);
    // numeric gradient of the log-likelihood at the optimum ~ 0
    auto ll_at = [&](const Eigen::VectorXd& beta) {
        const Eigen::VectorXd eta = X * beta;
        double ll = 0;
        for (int i = 0; i < eta.size(); ++i)
            ll += ds.response[i] * eta[i] - std::log1p(std::exp(eta[i]));
        return ll;
    };
    const double h = 1e-5;
    for (int j = 0; j < fit.coefficients.size(); ++j) {
        Eigen::VectorXd bp = fit.coefficients, bm = fit.coefficients;
        bp[j] += h;
        bm[j] -= h;
        const double g = (ll_at(bp) - ll_at(bm)) / (2 * h);
        REQUIRE(std::abs(g) < 1e-4 * (1.0 + std::abs(ll_at(fit.coefficients))));
    }
}

TEST_CASE("IRLS log-likelihood is non-decreasing on non-separated data") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const Dataset ds = toy_dataset(120, 4, seed, 0.8);
        const auto space = PredictorSpace::make(4);
        const auto X = design_matrix(ds, {1, 2, 3, 4}, space);
        double prev = -1e300;
        for (int iters = 1; iters <= 12; ++iters) {
            const auto fit = fit_logistic(X, ds.response, iters);
            REQUIRE(fit.log_likelihood >= prev - 1e-10);
            prev = fit.log_likelihood;
        }
    }
}

TEST_CASE("separation is flagged") {
    // perfectly separable data drives a coefficient past the threshold
    Eigen::MatrixXd X(20, 2);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = i < 10 ? -1.0 - i * 0.1 : 1.0 + i * 0.1;
        y[i] = i < 10 ? 0.0 : 1.0;
    }
    const auto fit = fit_logistic(X, y);
    CHECK(fit.separation_flag);
    CHECK(!fit.converged);
}

TEST_CASE("aic identity") {
    const Dataset ds = toy_dataset(80, 2, 9);
    const auto space = PredictorSpace::make(2);
    const auto X = design_matrix(ds, {1, 2}, space);
    const auto fit = fit_logistic(X, ds.response);
    CHECK(fit.aic == doctest::Approx(2.0 * 3 - 2.0 * fit.log_likelihood)
                         .epsilon(1e-12));
    FitResult trivial;
    trivial.coefficients = Eigen::VectorXd::Zero(1);
    trivial.log_likelihood = 0.0;
    CHECK(aic(trivial) == 2.0);
}

TEST_CASE("auc simple cases") {
    CHECK(auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == 0.5);
    CHECK_THROWS_AS(auc({0.1, 0.2}, {1, 1}), std::invalid_argument);
}

TEST_CASE("auc equals brute-force pair counting, including ties") {
    std::mt19937_64 rng(31);
    for (int inst = 0; inst < 200; ++inst) {
        std::uniform_int_distribution<int> nd(4, 30);
        const int n = nd(rng);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        std::uniform_int_distribution<int> level(0, 5);  // force ties
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = level(rng) / 5.0;
            labels[i] = level(rng) % 2;
            (labels[i] ? has1 : has0) = true;
        }
        if (!has0 || !has1) continue;
        REQUIRE(auc(scores, labels) ==
                doctest::Approx(auc_brute_force(scores, labels))
                    .epsilon(1e-12));
    }
}

TEST_CASE("make_folds") {
    SUBCASE("n = k -> singleton folds") {
        const auto f = make_folds(10, 10, 1);
        std::set<int> seen(f.begin(), f.end());
        CHECK(seen.size() == 10);
    }
    SUBCASE("4898 rows, 10 folds -> sizes in {489, 490}") {
        const auto f = make_folds(4898, 10, 3);
        std::vector<int> sizes(10, 0);
        for (int x : f) sizes[x]++;
        for (int s : sizes) CHECK((s == 489 || s == 490));
    }
    SUBCASE("deterministic per seed") {
        CHECK(make_folds(100, 5, 42) == make_folds(100, 5, 42));
        CHECK(make_folds(100, 5, 42) != make_folds(100, 5, 43));
    }
    SUBCASE("k > n rejected") {
        CHECK_THROWS_AS(make_folds(5, 6, 1), std::invalid_argument);
    }
}

TEST_CASE("cv folds are disjoint and cover all rows") {
    const auto f = make_folds(103, 10, 7);
    CHECK(static_cast<int>(f.size()) == 103);
    for (int x : f) CHECK((x >= 0 && x < 10));
}

TEST_CASE("cv_fitness sanity on noiseless threshold data") {
    // y depends on column 1 only; the true 1-term model separates almost
    // perfectly out of sample
    std::mt19937_64 rng(55);
    std::normal_distribution<double> nd(0.0, 1.0);
    Dataset ds;
    const int n = 400;
    ds.mains.resize(n, 3);
    ds.response.resize(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < 3; ++c) ds.mains(r, c) = nd(rng);
        ds.response[r] = ds.mains(r, 0) > 0.5 ? 1.0 : 0.0;
    }
    const auto space = PredictorSpace::make(3);
    const auto folds = make_folds(n, 10, 2);
    const auto cv = cv_fitness(ds, {1}, space, folds, Metric::cv_auc);
    CHECK(cv.mean_value >= 0.99);
    CHECK(cv.mean_value ==
          doctest::Approx(std::accumulate(cv.fold_values.begin(),
                                          cv.fold_values.end(), 0.0) /
                          cv.fold_values.size()));
}

TEST_CASE("cv_fitness aic uses scaled held-out deviance") {
    const Dataset ds = toy_dataset(200, 2, 21);
    const auto space = PredictorSpace::make(2);
    const auto folds = make_folds(200, 4, 9);
    const auto cv = cv_fitness(ds, {1, 2}, space, folds, Metric::cv_aic);
    CHECK(cv.fold_values.size() == 4);
    // each fold value should be within a sane band of the full-data AIC
    const auto full = fit_logistic(design_matrix(ds, {1, 2}, space),
                                   ds.response);
    for (double v : cv.fold_values) CHECK(std::abs(v - full.aic) < full.aic);
}

TEST_CASE("cv_fitness metric aic is the plain full-data AIC") {
    const Dataset ds = toy_dataset(150, 3, 77);
    const auto space = PredictorSpace::make(3);
    const auto folds = make_folds(150, 5, 4);
    const auto cv = cv_fitness(ds, {1, 2}, space, folds, Metric::aic);
    const auto full =
        fit_logistic(design_matrix(ds, {1, 2}, space), ds.response);
    CHECK(cv.fold_values.size() == 1);
    CHECK(cv.mean_value == full.aic);
    CHECK(cv.skipped_folds == 0);
}

TEST_CASE("standardize") {
    Dataset ds = toy_dataset(500, 3, 91);
    ds.mains.col(1).array() = ds.mains.col(1).array() * 10.0 + 5.0;
    ds.standardize();
    CHECK(ds.standardized);
    for (int c = 0; c < 3; ++c) {
        CHECK(ds.mains.col(c).mean() == doctest::Approx(0.0).epsilon(1e-10));
        const double sd =
            std::sqrt(ds.mains.col(c).squaredNorm() / (ds.n_rows() - 1));
        CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
    }
}
