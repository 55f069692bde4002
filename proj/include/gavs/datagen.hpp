#pragma once

#include <cstdint>
#include <vector>

#include "gavs/chromosome.hpp"
#include "gavs/model_fitness.hpp"
#include "gavs/predictor_space.hpp"

namespace gavs {

/// Simulated-data recipe: i.i.d. N(0,1) main effects, latent score = sum of
/// the true-term columns plus Gaussian noise, response thresholded at 2.
struct SimSpec {
    int n_main = 0;
    int n_samples = 1000;
    std::vector<TermId> true_terms;
    double noise_variance = 0.02;  // N(0, 0.02) read as variance
    double threshold = 2.0;
    std::uint64_t rng_seed = 0;
    bool complete_hierarchy = false;  // auto-insert missing parents
    bool standardize = true;
};

struct SimResult {
    Dataset dataset;
    SimSpec spec;  // spec echo with true_terms after any hierarchy completion
    double positive_rate = 0.0;
};

SimResult generate(const SimSpec& spec);

/// A hierarchical true set of exactly n_true terms: interaction terms drawn
/// from pairs of a sampled main-effect pool, with those mains included.
std::vector<TermId> default_true_set(int n_main, int n_true,
                                     double interaction_fraction, Rng& rng);

}  // namespace gavs
