#pragma once

#include <ulpa/representation.hpp>

namespace ulpa {

// Verdict of the evaluation oracle. "zero" means the element vanished on the
// whole test family; whether that settles equality in the algebra depends on
// Condition (L), so the regime is always reported alongside.
struct ZeroVerdict {
    bool zero = false;
    std::optional<BasisPath> witness;  // first basis path moved to a nonzero vector
    bool condition_l_holds = false;

    std::string regime() const {
        if (!zero) return "nonzero in the representation";
        if (condition_l_holds) return "zero (faithful regime)";
        return "zero in the representation (algebra equality undecided: Condition (L) fails)";
    }
};

// The finite family the oracle evaluates on: all sink paths and lassos with
// stem length max(bound, N + |G0|) and primitive cycle length |G0|, where N
// is the deepest word in x and G0 counts named vertices plus instantiated
// family sinks.
inline std::vector<BasisPath> zero_test_family(const Ultragraph& g, const AlgebraElement& x,
                                               int stem_bound) {
    int deepest = 0;
    long long family_bound = g.default_family_bound();
    for (const auto& [m, c] : x.terms()) {
        (void)c;
        deepest = std::max(deepest, static_cast<int>(std::max(m.alpha.size(), m.beta.size())));
        for (const auto& [fam, part] : m.mid.families) {
            (void)fam;
            if (!part.indices.empty())
                family_bound = std::max(family_bound, *part.indices.rbegin() + 1);
        }
    }
    int g0 = static_cast<int>(g.vertex_names().size()) +
             static_cast<int>(g.family_names().size() * family_bound);
    int stems = std::max(stem_bound, deepest + g0);
    int cycles = std::max(1, g0);

    std::vector<BasisPath> family;
    for (const auto& p : enumerate_pstar(g, stems, family_bound)) family.emplace_back(p);
    for (const auto& l : enumerate_lassos(g, stems, cycles)) family.emplace_back(l);
    return family;
}

inline ZeroVerdict zero_test(const Ultragraph& g, const AlgebraElement& x, int stem_bound) {
    ZeroVerdict verdict;
    verdict.condition_l_holds = condition_l(g).satisfied;
    for (const auto& b : zero_test_family(g, x, stem_bound)) {
        Vector image = act(g, x, unit_vector(x.ring(), b));
        if (!image.is_zero()) {
            verdict.zero = false;
            verdict.witness = b;
            return verdict;
        }
    }
    verdict.zero = true;
    return verdict;
}

inline ZeroVerdict equal_test(const Ultragraph& g, const AlgebraElement& x,
                              const AlgebraElement& y, int stem_bound) {
    check_same_ring(x, y);
    return zero_test(g, sub(x, y), stem_bound);
}

}  // namespace ulpa
