#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gavs/predictor_space.hpp"

namespace gavs {

/// Immutable dataset: main-effect design columns plus a binary response.
/// Interaction columns are never stored; they are formed on demand from
/// (optionally standardized) main columns.
struct Dataset {
    Eigen::MatrixXd mains;  // rows = observations, cols = n_main
    Eigen::VectorXd response;
    std::vector<std::string> column_names;
    bool standardized = false;

    int n_rows() const { return static_cast<int>(mains.rows()); }
    int n_main() const { return static_cast<int>(mains.cols()); }

    /// Center/scale each main column to mean 0, sd 1 (in place). Constant
    /// columns are left centered with unit divisor.
    void standardize();
    void validate() const;
};

struct FitResult {
    Eigen::VectorXd coefficients;  // intercept first
    double log_likelihood = 0.0;
    double aic = 0.0;
    bool converged = false;
    int iterations = 0;
    bool separation_flag = false;
    bool ridge_fallback = false;
};

/// cv_auc / cv_aic are averaged over held-out folds. aic is the plain
/// full-data AIC: on near-deterministic data a separating model drives
/// held-out log-loss to the probability clamp, so cross-validated AIC can
/// rank the generating model below smaller non-separating ones; full-data
/// AIC is the fitness of record for the simulated benchmarks.
enum class Metric { cv_auc, cv_aic, aic };

struct CvFitness {
    Metric metric = Metric::cv_auc;
    std::vector<double> fold_values;
    double mean_value = 0.0;
    int skipped_folds = 0;
    int nonconverged_folds = 0;
};

/// Columns: [intercept, sorted main columns, sorted interaction columns];
/// an interaction column is the elementwise product of its parents' columns.
Eigen::MatrixXd design_matrix(const Dataset& dataset,
                              const std::vector<TermId>& terms,
                              const PredictorSpace& space);

/// Logistic regression by Fisher scoring (IRLS).
FitResult fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       int max_iter = 25, double tol = 1e-8,
                       double separation_threshold = 15.0);

double aic(const FitResult& fit);

/// Wald standard errors from the inverse Fisher information at `coef`.
Eigen::VectorXd coef_std_errors(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& coef);

/// Mann-Whitney AUC by the rank method; ties contribute 1/2.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Deterministic fold assignment: a seeded permutation dealt round-robin,
/// so fold sizes differ by at most one.
std::vector<int> make_folds(int n_rows, int k, std::uint64_t seed);

CvFitness cv_fitness(const Dataset& dataset, const std::vector<TermId>& terms,
                     const PredictorSpace& space, const std::vector<int>& folds,
                     Metric metric, int max_iter = 25);

}  // namespace gavs
