#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gavs/predictor_space.hpp"

namespace gavs {

using Rng = std::mt19937_64;

/// n-bit binary encoding: bit t-1 set means term t is in the model.
struct StandardChromosome {
    std::vector<std::uint8_t> bits;
};

/// Fixed-length slot vector: each slot holds a TermId, or 0 for a dummy
/// placeholder. Non-zero entries are unique.
struct IndexedChromosome {
    std::vector<TermId> slots;
};

struct MutationRates {
    double p_mutate = 0.0;  // standard encoding
    double p_add = 0.0;     // indexed encoding, P_a
    double p_del = 0.0;     // indexed encoding, P_d
};

struct RepairLog {
    int parents_inserted = 0;
    int overflows = 0;  // interactions dropped for lack of dummy slots
};

StandardChromosome init_standard(const PredictorSpace& space,
                                 double init_density,
                                 const std::vector<TermId>& seeds, Rng& rng);

IndexedChromosome init_indexed(const PredictorSpace& space, int l,
                               const std::vector<TermId>& seeds, Rng& rng);

std::pair<StandardChromosome, StandardChromosome> crossover_standard(
    const StandardChromosome& a, const StandardChromosome& b,
    const PredictorSpace& space);

std::pair<IndexedChromosome, IndexedChromosome> crossover_indexed(
    const IndexedChromosome& a, const IndexedChromosome& b,
    const PredictorSpace& space, Rng& rng, RepairLog* log = nullptr);

/// Returns true if a mutation event had no eligible slot (counted as a no-op
/// in run statistics).
StandardChromosome mutate_standard(const StandardChromosome& c,
                                   const MutationRates& rates,
                                   const PredictorSpace& space, Rng& rng);

IndexedChromosome mutate_indexed(const IndexedChromosome& c,
                                 const MutationRates& rates,
                                 const PredictorSpace& space, Rng& rng,
                                 int* noop_count = nullptr,
                                 RepairLog* log = nullptr);

/// Enforce strong hierarchy in place: every included interaction gets both
/// parent main effects. Standard flips the parent bits on; indexed inserts
/// parents into random dummy slots, dropping the triggering interaction when
/// no dummy slot is free. Idempotent.
RepairLog repair_hierarchy(StandardChromosome& c, const PredictorSpace& space);
RepairLog repair_hierarchy(IndexedChromosome& c, const PredictorSpace& space,
                           Rng& rng);

std::vector<TermId> active_terms(const StandardChromosome& c);
std::vector<TermId> active_terms(const IndexedChromosome& c);

bool satisfies_hierarchy(const std::vector<TermId>& terms,
                         const PredictorSpace& space);
bool has_duplicates(const IndexedChromosome& c);

// Text form used in reports and resume files: standard as a 0/1 string,
// indexed as comma-separated slot values.
std::string to_text(const StandardChromosome& c);
std::string to_text(const IndexedChromosome& c);
StandardChromosome standard_from_text(const std::string& s);
IndexedChromosome indexed_from_text(const std::string& s);

}  // namespace gavs
