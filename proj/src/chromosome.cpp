#include "gavs/chromosome.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gavs {

namespace {

// Uniformly ordered k-sample from {0,...,n-1} by partial Fisher-Yates.
std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> d(i, n - 1);
        std::swap(pool[i], pool[d(rng)]);
    }
    pool.resize(k);
    return pool;
}

void validate_seeds(const std::vector<TermId>& seeds,
                    const PredictorSpace& space) {
    for (TermId t : seeds)
        if (t < 1 || t > space.total_terms)
            throw std::invalid_argument("invalid seed term id " +
                                        std::to_string(t));
}

}  // namespace

StandardChromosome init_standard(const PredictorSpace& space,
                                 double init_density,
                                 const std::vector<TermId>& seeds, Rng& rng) {
    if (init_density < 0.0 || init_density > 1.0)
        throw std::invalid_argument("init_density must be in [0,1]");
    validate_seeds(seeds, space);
    StandardChromosome c;
    c.bits.assign(space.total_terms, 0);
    std::bernoulli_distribution coin(init_density);
    for (auto& b : c.bits) b = coin(rng) ? 1 : 0;
    for (TermId t : seeds) c.bits[t - 1] = 1;
    repair_hierarchy(c, space);
    return c;
}

IndexedChromosome init_indexed(const PredictorSpace& space, int l,
                               const std::vector<TermId>& seeds, Rng& rng) {
    if (l < 1) throw std::invalid_argument("chromosome length must be >= 1");
    validate_seeds(seeds, space);
    if (static_cast<int>(seeds.size()) > l)
        throw std::invalid_argument("more seed terms than slots");
    IndexedChromosome c;
    c.slots.assign(l, 0);
    std::vector<TermId> chosen;
    if (!seeds.empty()) {
        chosen = seeds;
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    } else {
        std::uniform_int_distribution<int> kd(1, l);
        const int k = std::min(kd(rng), space.total_terms);
        for (int idx : sample_without_replacement(space.total_terms, k, rng))
            chosen.push_back(idx + 1);
    }
    const int k = static_cast<int>(chosen.size());
    const auto positions = sample_without_replacement(l, k, rng);
    for (int i = 0; i < k; ++i) c.slots[positions[i]] = chosen[i];
    repair_hierarchy(c, space, rng);
    return c;
}

std::pair<StandardChromosome, StandardChromosome> crossover_standard(
    const StandardChromosome& a, const StandardChromosome& b,
    const PredictorSpace& space) {
    if (a.bits.size() != b.bits.size())
        throw std::invalid_argument("crossover: length mismatch");
    const std::size_t mid = a.bits.size() / 2;
    StandardChromosome c1 = a, c2 = b;
    for (std::size_t i = mid; i < a.bits.size(); ++i) {
        c1.bits[i] = b.bits[i];
        c2.bits[i] = a.bits[i];
    }
    repair_hierarchy(c1, space);
    repair_hierarchy(c2, space);
    return {std::move(c1), std::move(c2)};
}

std::pair<IndexedChromosome, IndexedChromosome> crossover_indexed(
    const IndexedChromosome& a, const IndexedChromosome& b,
    const PredictorSpace& space, Rng& rng, RepairLog* log) {
    if (a.slots.size() != b.slots.size())
        throw std::invalid_argument("crossover: length mismatch");
    const std::size_t l = a.slots.size();
    const std::size_t mid = l / 2;
    auto make_child = [&](const IndexedChromosome& head,
                          const IndexedChromosome& tail) {
        IndexedChromosome c;
        c.slots.resize(l);
        std::copy(head.slots.begin(), head.slots.begin() + mid,
                  c.slots.begin());
        std::copy(tail.slots.begin() + mid, tail.slots.end(),
                  c.slots.begin() + mid);
        // duplicate variables keep the head-half copy; the tail copy
        // becomes a dummy
        std::set<TermId> head_terms(c.slots.begin(), c.slots.begin() + mid);
        for (std::size_t i = mid; i < l; ++i)
            if (c.slots[i] != 0 && head_terms.count(c.slots[i]))
                c.slots[i] = 0;
        return c;
    };
    IndexedChromosome c1 = make_child(a, b);
    IndexedChromosome c2 = make_child(b, a);
    const RepairLog l1 = repair_hierarchy(c1, space, rng);
    const RepairLog l2 = repair_hierarchy(c2, space, rng);
    if (log) {
        log->parents_inserted += l1.parents_inserted + l2.parents_inserted;
        log->overflows += l1.overflows + l2.overflows;
    }
    return {std::move(c1), std::move(c2)};
}

StandardChromosome mutate_standard(const StandardChromosome& c,
                                   const MutationRates& rates,
                                   const PredictorSpace& space, Rng& rng) {
    StandardChromosome out = c;
    std::bernoulli_distribution event(rates.p_mutate);
    if (!event(rng)) return out;
    std::uniform_int_distribution<int> pos(0, space.total_terms - 1);
    const int p = pos(rng);
    out.bits[p] ^= 1;
    const TermId flipped = p + 1;
    if (out.bits[p] == 0 && flipped <= space.n_main) {
        // deleting a main effect cascades to its interactions
        for (TermId child : children_of(flipped, space))
            out.bits[child - 1] = 0;
    }
    repair_hierarchy(out, space);
    return out;
}

IndexedChromosome mutate_indexed(const IndexedChromosome& c,
                                 const MutationRates& rates,
                                 const PredictorSpace& space, Rng& rng,
                                 int* noop_count, RepairLog* log) {
    IndexedChromosome out = c;
    const int l = static_cast<int>(out.slots.size());
    auto note_noop = [&] {
        if (noop_count) ++*noop_count;
    };

    std::bernoulli_distribution del_event(rates.p_del);
    if (del_event(rng)) {
        std::vector<int> filled;
        for (int i = 0; i < l; ++i)
            if (out.slots[i] != 0) filled.push_back(i);
        if (filled.empty()) {
            note_noop();
        } else {
            std::uniform_int_distribution<int> d(
                0, static_cast<int>(filled.size()) - 1);
            const int slot = filled[d(rng)];
            const TermId victim = out.slots[slot];
            out.slots[slot] = 0;
            if (victim <= space.n_main) {
                // cascade: interactions of a deleted main effect go too
                std::set<TermId> kids;
                for (TermId child : children_of(victim, space))
                    kids.insert(child);
                for (auto& s : out.slots)
                    if (s != 0 && kids.count(s)) s = 0;
            }
        }
    }

    std::bernoulli_distribution add_event(rates.p_add);
    if (add_event(rng)) {
        std::vector<int> dummies;
        std::set<TermId> present;
        for (int i = 0; i < l; ++i) {
            if (out.slots[i] == 0)
                dummies.push_back(i);
            else
                present.insert(out.slots[i]);
        }
        const int absent = space.total_terms - static_cast<int>(present.size());
        if (dummies.empty() || absent == 0) {
            note_noop();
        } else {
            std::uniform_int_distribution<int> d(
                0, static_cast<int>(dummies.size()) - 1);
            const int slot = dummies[d(rng)];
            std::uniform_int_distribution<int> td(0, absent - 1);
            int r = td(rng);
            TermId chosen = 0;
            for (TermId t = 1; t <= space.total_terms; ++t) {
                if (present.count(t)) continue;
                if (r-- == 0) {
                    chosen = t;
                    break;
                }
            }
            out.slots[slot] = chosen;
        }
    }

    const RepairLog rlog = repair_hierarchy(out, space, rng);
    if (log) {
        log->parents_inserted += rlog.parents_inserted;
        log->overflows += rlog.overflows;
    }
    return out;
}

RepairLog repair_hierarchy(StandardChromosome& c, const PredictorSpace& space) {
    RepairLog log;
    for (int t = space.n_main + 1; t <= space.total_terms; ++t) {
        if (!c.bits[t - 1]) continue;
        for (TermId parent : parents_of(t, space)) {
            if (!c.bits[parent - 1]) {
                c.bits[parent - 1] = 1;
                ++log.parents_inserted;
            }
        }
    }
    return log;
}

RepairLog repair_hierarchy(IndexedChromosome& c, const PredictorSpace& space,
                           Rng& rng) {
    RepairLog log;
    const int l = static_cast<int>(c.slots.size());
    // interactions processed in ascending TermId order
    std::vector<std::pair<TermId, int>> interactions;  // (term, slot)
    std::set<TermId> present;
    for (int i = 0; i < l; ++i) {
        if (c.slots[i] == 0) continue;
        present.insert(c.slots[i]);
        if (c.slots[i] > space.n_main) interactions.emplace_back(c.slots[i], i);
    }
    std::sort(interactions.begin(), interactions.end());
    for (auto [term, slot] : interactions) {
        std::vector<TermId> missing;
        for (TermId parent : parents_of(term, space))
            if (!present.count(parent)) missing.push_back(parent);
        if (missing.empty()) continue;
        std::vector<int> dummies;
        for (int i = 0; i < l; ++i)
            if (c.slots[i] == 0) dummies.push_back(i);
        if (static_cast<int>(dummies.size()) <
            static_cast<int>(missing.size())) {
            c.slots[slot] = 0;
            present.erase(term);
            ++log.overflows;
            continue;
        }
        for (TermId parent : missing) {
            std::uniform_int_distribution<int> d(
                0, static_cast<int>(dummies.size()) - 1);
            const int pick = d(rng);
            c.slots[dummies[pick]] = parent;
            present.insert(parent);
            dummies.erase(dummies.begin() + pick);
            ++log.parents_inserted;
        }
    }
    return log;
}

std::vector<TermId> active_terms(const StandardChromosome& c) {
    std::vector<TermId> out;
    for (std::size_t i = 0; i < c.bits.size(); ++i)
        if (c.bits[i]) out.push_back(static_cast<TermId>(i) + 1);
    return out;
}

std::vector<TermId> active_terms(const IndexedChromosome& c) {
    std::vector<TermId> out;
    for (TermId t : c.slots)
        if (t != 0) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

bool satisfies_hierarchy(const std::vector<TermId>& terms,
                         const PredictorSpace& space) {
    std::set<TermId> s(terms.begin(), terms.end());
    for (TermId t : terms) {
        if (t <= space.n_main) continue;
        for (TermId parent : parents_of(t, space))
            if (!s.count(parent)) return false;
    }
    return true;
}

bool has_duplicates(const IndexedChromosome& c) {
    std::set<TermId> seen;
    for (TermId t : c.slots) {
        if (t == 0) continue;
        if (!seen.insert(t).second) return true;
    }
    return false;
}

std::string to_text(const StandardChromosome& c) {
    std::string s;
    s.reserve(c.bits.size());
    for (auto b : c.bits) s.push_back(b ? '1' : '0');
    return s;
}

std::string to_text(const IndexedChromosome& c) {
    std::ostringstream os;
    for (std::size_t i = 0; i < c.slots.size(); ++i) {
        if (i) os << ',';
        os << c.slots[i];
    }
    return os.str();
}

StandardChromosome standard_from_text(const std::string& s) {
    StandardChromosome c;
    c.bits.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("bad standard chromosome text");
        c.bits.push_back(ch == '1');
    }
    return c;
}

IndexedChromosome indexed_from_text(const std::string& s) {
    IndexedChromosome c;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) c.slots.push_back(std::stoi(tok));
    return c;
}

}  // namespace gavs
