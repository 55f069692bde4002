#include "gavs/predictor_space.hpp"

#include <stdexcept>
#include <string>

namespace gavs {

int term_count(int n_main, bool include_interactions) {
    if (n_main < 1)
        throw std::invalid_argument("term_count: n_main must be >= 1");
    if (!include_interactions) return n_main;
    return n_main + n_main * (n_main - 1) / 2;
}

PredictorSpace PredictorSpace::make(int n_main, bool include_interactions) {
    PredictorSpace s;
    s.n_main = n_main;
    s.include_interactions = include_interactions;
    s.total_terms = term_count(n_main, include_interactions);
    return s;
}

TermId encode_term(const TermDescriptor& d, const PredictorSpace& space) {
    const int n = space.n_main;
    if (d.is_main()) {
        if (d.i < 1 || d.i > n)
            throw std::invalid_argument("encode_term: main index out of range");
        return d.i;
    }
    if (!space.include_interactions)
        throw std::invalid_argument("encode_term: interactions disabled");
    if (d.i < 1 || d.j > n || d.i >= d.j)
        throw std::invalid_argument("encode_term: bad interaction pair");
    // lexicographic pair enumeration (1,2),(1,3),...,(1,n),(2,3),...
    const int offset = (d.i - 1) * n - d.i * (d.i - 1) / 2 + (d.j - d.i);
    return n + offset;
}

TermDescriptor decode_term(TermId id, const PredictorSpace& space) {
    const int n = space.n_main;
    if (id < 1 || id > space.total_terms)
        throw std::invalid_argument("decode_term: id " + std::to_string(id) +
                                    " out of range 1.." +
                                    std::to_string(space.total_terms));
    if (id <= n) return TermDescriptor::main(id);
    int offset = id - n;  // 1-based offset into the pair list
    int i = 1;
    while (offset > n - i) {
        offset -= n - i;
        ++i;
    }
    return TermDescriptor::interaction(i, i + offset);
}

std::vector<TermId> parents_of(TermId id, const PredictorSpace& space) {
    const TermDescriptor d = decode_term(id, space);
    if (d.is_main()) return {};
    return {d.i, d.j};
}

std::vector<TermId> children_of(TermId main_id, const PredictorSpace& space) {
    const TermDescriptor d = decode_term(main_id, space);
    if (!d.is_main())
        throw std::invalid_argument("children_of: id is not a main effect");
    std::vector<TermId> out;
    if (!space.include_interactions) return out;
    out.reserve(space.n_main - 1);
    for (int other = 1; other <= space.n_main; ++other) {
        if (other == d.i) continue;
        const int i = std::min(d.i, other), j = std::max(d.i, other);
        out.push_back(encode_term(TermDescriptor::interaction(i, j), space));
    }
    return out;
}

std::string term_name(TermId id, const PredictorSpace& space,
                      const std::vector<std::string>& column_names) {
    const TermDescriptor d = decode_term(id, space);
    auto name = [&](int i) {
        if (i - 1 < static_cast<int>(column_names.size()))
            return column_names[i - 1];
        return "x" + std::to_string(i);
    };
    if (d.is_main()) return name(d.i);
    return name(d.i) + ":" + name(d.j);
}

}  // namespace gavs
