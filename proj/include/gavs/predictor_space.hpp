#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gavs {

/// Flat 1-based index of a term in the predictor space. 0 is reserved as
/// the dummy-slot marker and is never a valid TermId.
using TermId = int;

/// A term is either a single main effect x_i or a pairwise interaction
/// x_i * x_j with i < j.
struct TermDescriptor {
    int i = 0;
    int j = 0;  // 0 for main effects

    static TermDescriptor main(int i) { return {i, 0}; }
    static TermDescriptor interaction(int i, int j) { return {i, j}; }
    bool is_main() const { return j == 0; }
    bool operator==(const TermDescriptor&) const = default;
};

/// Canonical enumeration of the predictor space: main effects occupy
/// indices 1..n_main, pairwise interactions follow in lexicographic pair
/// order (1,2),(1,3),...,(1,n),(2,3),...
struct PredictorSpace {
    int n_main = 0;
    bool include_interactions = true;
    int total_terms = 0;

    static PredictorSpace make(int n_main, bool include_interactions = true);
};

int term_count(int n_main, bool include_interactions);

TermId encode_term(const TermDescriptor& d, const PredictorSpace& space);
TermDescriptor decode_term(TermId id, const PredictorSpace& space);

/// Main-effect TermIds of an interaction's two parents; empty for mains.
std::vector<TermId> parents_of(TermId id, const PredictorSpace& space);

/// All n_main-1 interaction TermIds whose pair contains the given main effect.
std::vector<TermId> children_of(TermId main_id, const PredictorSpace& space);

std::string term_name(TermId id, const PredictorSpace& space,
                      const std::vector<std::string>& column_names = {});

}  // namespace gavs
