#include "gavs/model_fitness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gavs {

namespace {

constexpr double kProbClamp = 1e-10;

double log_likelihood_of(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double ll = 0.0;
    for (int i = 0; i < eta.size(); ++i) {
        double mu = 1.0 / (1.0 + std::exp(-eta[i]));
        mu = std::clamp(mu, kProbClamp, 1.0 - kProbClamp);
        ll += y[i] * std::log(mu) + (1.0 - y[i]) * std::log(1.0 - mu);
    }
    return ll;
}

}  // namespace

void Dataset::standardize() {
    if (standardized) return;
    const int n = n_rows();
    for (int c = 0; c < mains.cols(); ++c) {
        const double mean = mains.col(c).mean();
        mains.col(c).array() -= mean;
        double sd = 0.0;
        if (n > 1) sd = std::sqrt(mains.col(c).squaredNorm() / (n - 1));
        if (sd > 0.0) mains.col(c) /= sd;
    }
    standardized = true;
}

void Dataset::validate() const {
    if (n_rows() < 1) throw std::invalid_argument("dataset has no rows");
    if (response.size() != n_rows())
        throw std::invalid_argument("response length mismatch");
    for (int i = 0; i < response.size(); ++i)
        if (response[i] != 0.0 && response[i] != 1.0)
            throw std::invalid_argument("response is not binary 0/1");
}

Eigen::MatrixXd design_matrix(const Dataset& dataset,
                              const std::vector<TermId>& terms,
                              const PredictorSpace& space) {
    if (dataset.n_rows() < 1)
        throw std::invalid_argument("design_matrix: empty dataset");
    std::vector<TermId> sorted = terms;
    std::sort(sorted.begin(), sorted.end());
    Eigen::MatrixXd X(dataset.n_rows(), 1 + sorted.size());
    X.col(0).setOnes();
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const TermDescriptor d = decode_term(sorted[k], space);
        if (d.is_main())
            X.col(1 + k) = dataset.mains.col(d.i - 1);
        else
            X.col(1 + k) = dataset.mains.col(d.i - 1).cwiseProduct(
                dataset.mains.col(d.j - 1));
    }
    return X;
}

FitResult fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       int max_iter, double tol, double separation_threshold) {
    if (X.rows() != y.size())
        throw std::invalid_argument("fit_logistic: row count mismatch");
    const double ymean = y.mean();
    if (ymean <= 0.0 || ymean >= 1.0)
        throw std::invalid_argument("fit_logistic: response has a single class");

    const int p = static_cast<int>(X.cols());
    FitResult fit;
    fit.coefficients = Eigen::VectorXd::Zero(p);

    Eigen::VectorXd eta = Eigen::VectorXd::Zero(X.rows());
    bool coef_converged = false;
    for (int it = 0; it < max_iter; ++it) {
        fit.iterations = it + 1;
        Eigen::VectorXd mu(X.rows()), w(X.rows());
        for (int i = 0; i < X.rows(); ++i) {
            double m = 1.0 / (1.0 + std::exp(-eta[i]));
            m = std::clamp(m, kProbClamp, 1.0 - kProbClamp);
            mu[i] = m;
            w[i] = m * (1.0 - m);
        }
        Eigen::MatrixXd XtWX = X.transpose() * w.asDiagonal() * X;
        Eigen::VectorXd score = X.transpose() * (y - mu);
        Eigen::VectorXd delta = XtWX.ldlt().solve(score);
        if (!delta.allFinite()) {
            XtWX.diagonal().array() += 1e-8;
            delta = XtWX.ldlt().solve(score);
            fit.ridge_fallback = true;
        }
        fit.coefficients += delta;
        eta = X * fit.coefficients;
        double rel = 0.0;
        for (int j = 0; j < p; ++j)
            rel = std::max(rel,
                           std::abs(delta[j]) /
                               (1.0 + std::abs(fit.coefficients[j])));
        if (rel < tol) {
            coef_converged = true;
            break;
        }
    }

    Eigen::VectorXd mu(X.rows());
    for (int i = 0; i < X.rows(); ++i)
        mu[i] = std::clamp(1.0 / (1.0 + std::exp(-eta[i])), kProbClamp,
                           1.0 - kProbClamp);
    const Eigen::VectorXd score = X.transpose() * (y - mu);
    fit.converged = coef_converged && score.lpNorm<Eigen::Infinity>() < 1e-6;
    fit.log_likelihood = log_likelihood_of(eta, y);
    fit.aic = 2.0 * p - 2.0 * fit.log_likelihood;
    fit.separation_flag =
        fit.coefficients.lpNorm<Eigen::Infinity>() > separation_threshold;
    return fit;
}

double aic(const FitResult& fit) {
    return 2.0 * fit.coefficients.size() - 2.0 * fit.log_likelihood;
}

Eigen::VectorXd coef_std_errors(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& coef) {
    Eigen::VectorXd eta = X * coef;
    Eigen::VectorXd w(X.rows());
    for (int i = 0; i < X.rows(); ++i) {
        double m = 1.0 / (1.0 + std::exp(-eta[i]));
        m = std::clamp(m, kProbClamp, 1.0 - kProbClamp);
        w[i] = m * (1.0 - m);
    }
    Eigen::MatrixXd info = X.transpose() * w.asDiagonal() * X;
    Eigen::MatrixXd cov = info.ldlt().solve(
        Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    return cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += (l != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auc: both classes required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // average ranks over tie groups, then the Mann-Whitney identity
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (labels[k] != 0) rank_sum_pos += rank[k];
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<int> make_folds(int n_rows, int k, std::uint64_t seed) {
    if (k < 1 || k > n_rows)
        throw std::invalid_argument("make_folds: need 1 <= k <= n_rows");
    std::vector<int> perm(n_rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> fold(n_rows);
    for (int i = 0; i < n_rows; ++i) fold[perm[i]] = i % k;
    return fold;
}

CvFitness cv_fitness(const Dataset& dataset, const std::vector<TermId>& terms,
                     const PredictorSpace& space, const std::vector<int>& folds,
                     Metric metric, int max_iter) {
    if (static_cast<int>(folds.size()) != dataset.n_rows())
        throw std::invalid_argument("cv_fitness: fold vector length mismatch");
    const int k = folds.empty() ? 0 : *std::max_element(folds.begin(), folds.end()) + 1;
    if (k < 2) throw std::invalid_argument("cv_fitness: need >= 2 folds");

    const Eigen::MatrixXd X = design_matrix(dataset, terms, space);
    const Eigen::VectorXd& y = dataset.response;
    const int n = dataset.n_rows();

    CvFitness cv;
    cv.metric = metric;
    if (metric == Metric::aic) {  // full-data fit, no held-out evaluation
        const FitResult fit = fit_logistic(X, y, max_iter);
        if (!fit.converged) ++cv.nonconverged_folds;
        cv.fold_values.push_back(fit.aic);
        cv.mean_value = fit.aic;
        return cv;
    }
    for (int f = 0; f < k; ++f) {
        std::vector<int> train, test;
        for (int i = 0; i < n; ++i) (folds[i] == f ? test : train).push_back(i);
        Eigen::MatrixXd Xtr(train.size(), X.cols());
        Eigen::VectorXd ytr(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            Xtr.row(i) = X.row(train[i]);
            ytr[i] = y[train[i]];
        }
        const double trmean = ytr.mean();
        if (trmean <= 0.0 || trmean >= 1.0) {
            ++cv.skipped_folds;
            continue;
        }
        const FitResult fit = fit_logistic(Xtr, ytr, max_iter);
        if (!fit.converged) ++cv.nonconverged_folds;

        if (metric == Metric::cv_auc) {
            std::vector<double> scores;
            std::vector<int> labels;
            bool has0 = false, has1 = false;
            for (int i : test) {
                scores.push_back(X.row(i) * fit.coefficients);
                labels.push_back(y[i] != 0.0);
                (y[i] != 0.0 ? has1 : has0) = true;
            }
            if (!has0 || !has1) {
                ++cv.skipped_folds;
                continue;
            }
            cv.fold_values.push_back(auc(scores, labels));
        } else {
            Eigen::VectorXd eta(test.size());
            Eigen::VectorXd yte(test.size());
            for (std::size_t i = 0; i < test.size(); ++i) {
                eta[i] = X.row(test[i]) * fit.coefficients;
                yte[i] = y[test[i]];
            }
            const double ll_test = log_likelihood_of(eta, yte);
            // held-out deviance scaled to the full sample size so fold AICs
            // stay commensurate with full-data AIC magnitudes
            const double scaled_ll =
                ll_test * static_cast<double>(n) / static_cast<double>(test.size());
            cv.fold_values.push_back(2.0 * X.cols() - 2.0 * scaled_ll);
        }
    }
    if (cv.fold_values.empty())
        throw std::runtime_error("cv_fitness: all folds degenerate");
    cv.mean_value =
        std::accumulate(cv.fold_values.begin(), cv.fold_values.end(), 0.0) /
        cv.fold_values.size();
    return cv;
}

}  // namespace gavs
