#pragma once

#include <ulpa/branching.hpp>
#include <ulpa/matrix_rep.hpp>

namespace ulpa {

using ColVec = std::vector<Scalar>;

// Column-space bases of the submodules M_e = im(s_e t_e) and M_v = im(p_v),
// together with the structural facts that make them usable: s_e restricts to
// an isomorphism M_r(e) -> M_e with inverse t_e, and distinct vertex (edge)
// submodules intersect trivially.
struct SubmoduleFamily {
    std::map<EdgeId, std::vector<ColVec>> edge_basis;
    std::map<Vertex, std::vector<ColVec>> vertex_basis;
};

namespace detail {

inline std::vector<ColVec> column_space(const Matrix& m) {
    SpanBuilder span(m.ring(), m.rows());
    std::vector<ColVec> basis;
    for (int j = 0; j < m.cols(); ++j) {
        ColVec col = m.column(j);
        if (span.add(col)) basis.push_back(std::move(col));
    }
    return basis;
}

}  // namespace detail

inline SubmoduleFamily submodules(const MatrixRep& m) {
    if (!m.ring.is_field())
        throw Error("submodule analysis needs a field, not " + m.ring.name());
    SubmoduleFamily out;
    for (EdgeId e = 0; e < m.g.edge_count(); ++e)
        out.edge_basis[e] = detail::column_space(m.s.at(e) * m.t.at(e));
    for (const auto& [v, pv] : m.p) out.vertex_basis[v] = detail::column_space(pv);

    // s_e: M_r(e) -> M_e invertible with inverse t_e
    for (EdgeId e = 0; e < m.g.edge_count(); ++e) {
        Matrix p_rng = m.p_of(m.g.edge(e).range);
        Matrix round_trip = m.t.at(e) * m.s.at(e);
        if (!(round_trip * p_rng == p_rng))
            throw Error("t(" + m.g.edge(e).name + ")s(" + m.g.edge(e).name +
                        ") is not the identity on M_r(e)");
    }
    // pairwise trivial intersections via rank additivity
    auto disjoint = [&](const std::vector<ColVec>& a, const std::vector<ColVec>& b) {
        std::vector<ColVec> both = a;
        both.insert(both.end(), b.begin(), b.end());
        return span_rank(m.ring, m.dim, both) ==
               static_cast<int>(a.size()) + static_cast<int>(b.size());
    };
    for (auto i = out.vertex_basis.begin(); i != out.vertex_basis.end(); ++i)
        for (auto j = std::next(i); j != out.vertex_basis.end(); ++j)
            if (!disjoint(i->second, j->second))
                throw Error("M_" + i->first.display() + " meets M_" + j->first.display());
    for (auto i = out.edge_basis.begin(); i != out.edge_basis.end(); ++i)
        for (auto j = std::next(i); j != out.edge_basis.end(); ++j)
            if (!disjoint(i->second, j->second))
                throw Error("M_" + m.g.edge(i->first).name + " meets M_" + m.g.edge(j->first).name);
    return out;
}

struct PerfectReport {
    bool perfect = true;
    std::string detail;
};

// Perfect: M_v decomposes as the direct sum of the M_e over edges leaving v,
// and M is the direct sum of all M_v. Decided by exact rank arithmetic.
inline PerfectReport is_perfect_rep(const MatrixRep& m) {
    if (!m.ring.is_field())
        throw Error("perfectness needs exact rank computations over a field, not " + m.ring.name());
    SubmoduleFamily sub = submodules(m);
    for (const auto& v : m.g.vertex_names()) {
        const auto& edges = m.g.out_edges(v);
        if (edges.empty()) continue;
        std::vector<ColVec> combined;
        int total = 0;
        for (EdgeId e : edges) {
            combined.insert(combined.end(), sub.edge_basis[e].begin(), sub.edge_basis[e].end());
            total += static_cast<int>(sub.edge_basis[e].size());
        }
        int vrank = static_cast<int>(sub.vertex_basis[Vertex::named(v)].size());
        int crank = span_rank(m.ring, m.dim, combined);
        if (crank != total)
            return PerfectReport{false, "edge submodules into " + v + " are not independent"};
        if (crank != vrank)
            return PerfectReport{false,
                                 "M_" + v + " is not the direct sum of its edge submodules"};
        // containment: the combined span sits inside M_v by relation (2)
        SpanBuilder inside(m.ring, m.dim);
        for (const auto& b : sub.vertex_basis[Vertex::named(v)]) inside.add(b);
        for (const auto& b : combined)
            if (inside.add(b))
                return PerfectReport{false, "an edge submodule leaves M_" + v};
    }
    std::vector<ColVec> all;
    int total = 0;
    for (const auto& [v, basis] : sub.vertex_basis) {
        (void)v;
        all.insert(all.end(), basis.begin(), basis.end());
        total += static_cast<int>(basis.size());
    }
    if (span_rank(m.ring, m.dim, all) != total)
        return PerfectReport{false, "vertex submodules are not independent"};
    if (total != m.dim)
        return PerfectReport{false, "vertex submodules do not fill the module"};
    return PerfectReport{};
}

// An explicit choice of ordered bases: one per edge, one per sink vertex;
// non-sink vertex bases are derived by concatenating their edge bases in
// declaration order.
struct BasisAssignment {
    std::map<EdgeId, std::vector<ColVec>> edge_basis;
    std::map<Vertex, std::vector<ColVec>> sink_basis;
};

namespace detail {

inline std::vector<ColVec> vertex_vectors(const MatrixRep& m, const BasisAssignment& b,
                                          const Vertex& v) {
    if (!v.is_family_member() && !m.g.out_edges(v.id).empty()) {
        std::vector<ColVec> out;
        for (EdgeId e : m.g.out_edges(v.id)) {
            auto it = b.edge_basis.find(e);
            if (it == b.edge_basis.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    }
    auto it = b.sink_basis.find(v);
    return it == b.sink_basis.end() ? std::vector<ColVec>{} : it->second;
}

inline std::vector<ColVec> range_vectors(const MatrixRep& m, const BasisAssignment& b,
                                         const VertexSet& range) {
    std::vector<ColVec> out;
    for (const auto& v : m.g.vertex_names())
        if (range.contains(Vertex::named(v))) {
            auto vv = vertex_vectors(m, b, Vertex::named(v));
            out.insert(out.end(), vv.begin(), vv.end());
        }
    for (const auto& [v, basis] : b.sink_basis)
        if (v.is_family_member() && range.contains(v))
            out.insert(out.end(), basis.begin(), basis.end());
    return out;
}

}  // namespace detail

// The permutativity test for a given basis choice: s_e maps the basis of
// M_r(e) onto the basis of M_e, exactly and as a set.
inline bool is_permutative_with(const MatrixRep& m, const BasisAssignment& b) {
    SubmoduleFamily sub = submodules(m);
    auto check_inside = [&](const std::vector<ColVec>& claimed, const std::vector<ColVec>& space,
                            const std::string& what) {
        SpanBuilder span(m.ring, m.dim);
        for (const auto& v : space) span.add(v);
        SpanBuilder independent(m.ring, m.dim);
        for (const auto& v : claimed) {
            if (!span.contains(v)) throw Error("basis vector outside " + what);
            if (!independent.add(v)) throw Error("claimed basis of " + what + " is dependent");
        }
        if (static_cast<int>(claimed.size()) != span.rank())
            throw Error("claimed basis does not span " + what);
    };
    for (EdgeId e = 0; e < m.g.edge_count(); ++e) {
        auto it = b.edge_basis.find(e);
        if (it == b.edge_basis.end()) {
            if (!sub.edge_basis[e].empty()) throw Error("missing basis for a nonzero M_e");
            continue;
        }
        check_inside(it->second, sub.edge_basis[e], "M_" + m.g.edge(e).name);
    }
    for (const auto& [v, basis] : b.sink_basis)
        check_inside(basis, sub.vertex_basis.count(v) ? sub.vertex_basis[v] : std::vector<ColVec>{},
                     "M_" + v.display());

    for (EdgeId e = 0; e < m.g.edge_count(); ++e) {
        std::vector<ColVec> domain = detail::range_vectors(m, b, m.g.edge(e).range);
        std::set<ColVec> image;
        for (const auto& v : domain) image.insert(m.s.at(e).apply(v));
        std::set<ColVec> target;
        auto it = b.edge_basis.find(e);
        if (it != b.edge_basis.end()) target.insert(it->second.begin(), it->second.end());
        if (image != target) return false;
    }
    return true;
}

// Tries the standard coordinate assignment, then column supports when every
// generator matrix is monomial. Failure to find a basis is not a proof that
// none exists.
inline std::optional<BasisAssignment> heuristic_basis_search(const MatrixRep& m) {
    auto diagonal_01 = [&](const Matrix& mat) -> std::optional<std::vector<int>> {
        std::vector<int> support;
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j) {
                const Scalar& x = mat.at(i, j);
                if (m.ring.is_zero(x)) continue;
                if (i != j || !(x == m.ring.one())) return std::nullopt;
                support.push_back(i);
            }
        return support;
    };
    auto coordinate = [&](int i) {
        ColVec v(m.dim, m.ring.zero());
        v[i] = m.ring.one();
        return v;
    };

    BasisAssignment standard;
    bool standard_ok = true;
    for (EdgeId e = 0; e < m.g.edge_count() && standard_ok; ++e) {
        auto support = diagonal_01(m.s.at(e) * m.t.at(e));
        if (!support) {
            standard_ok = false;
            break;
        }
        std::vector<ColVec>& basis = standard.edge_basis[e];
        for (int i : *support) basis.push_back(coordinate(i));
    }
    for (const auto& [v, pv] : m.p) {
        if (!standard_ok) break;
        if (!v.is_family_member() && !m.g.out_edges(v.id).empty()) continue;
        auto support = diagonal_01(pv);
        if (!support) {
            standard_ok = false;
            break;
        }
        std::vector<ColVec>& basis = standard.sink_basis[v];
        for (int i : *support) basis.push_back(coordinate(i));
    }
    if (standard_ok) {
        try {
            if (is_permutative_with(m, standard)) return standard;
        } catch (const Error&) {
        }
    }

    auto monomial_matrix = [&](const Matrix& mat) {
        for (int i = 0; i < m.dim; ++i) {
            int nontrivial = 0;
            for (int j = 0; j < m.dim; ++j)
                if (!m.ring.is_zero(mat.at(i, j))) ++nontrivial;
            if (nontrivial > 1) return false;
        }
        for (int j = 0; j < m.dim; ++j) {
            int nontrivial = 0;
            for (int i = 0; i < m.dim; ++i)
                if (!m.ring.is_zero(mat.at(i, j))) ++nontrivial;
            if (nontrivial > 1) return false;
        }
        return true;
    };
    bool all_monomial = true;
    for (const auto& [v, pv] : m.p) {
        (void)v;
        all_monomial = all_monomial && monomial_matrix(pv);
    }
    for (EdgeId e = 0; e < m.g.edge_count(); ++e)
        all_monomial = all_monomial && monomial_matrix(m.s.at(e)) && monomial_matrix(m.t.at(e));
    if (!all_monomial) return std::nullopt;

    BasisAssignment columns;
    for (EdgeId e = 0; e < m.g.edge_count(); ++e)
        columns.edge_basis[e] = detail::column_space(m.s.at(e) * m.t.at(e));
    for (const auto& [v, pv] : m.p) {
        if (!v.is_family_member() && !m.g.out_edges(v.id).empty()) continue;
        columns.sink_basis[v] = detail::column_space(pv);
    }
    try {
        if (is_permutative_with(m, columns)) return columns;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// The branching system carried by a permutative basis: X indexes the flattened
// basis, domains and ranges are index sets, and f_e reads off where s_e sends
// each basis vector.
inline BranchingSystem extract_bs(const MatrixRep& m, const BasisAssignment& b) {
    if (!is_permutative_with(m, b)) throw Error("representation is not permutative with this basis");

    std::vector<std::pair<Vertex, ColVec>> flat;
    for (const auto& v : m.g.vertex_names())
        for (const auto& vec : detail::vertex_vectors(m, b, Vertex::named(v)))
            flat.emplace_back(Vertex::named(v), vec);
    for (const auto& [v, basis] : b.sink_basis)
        if (v.is_family_member())
            for (const auto& vec : basis) flat.emplace_back(v, vec);

    std::map<ColVec, int> pos;
    for (size_t i = 0; i < flat.size(); ++i) pos[flat[i].second] = static_cast<int>(i);

    BranchingSystem out{m.g, static_cast<int>(flat.size()), {}, {}, {}};
    for (size_t i = 0; i < flat.size(); ++i) out.D[flat[i].first].insert(static_cast<int>(i));
    for (EdgeId e = 0; e < m.g.edge_count(); ++e) {
        out.R.try_emplace(e);
        out.f.try_emplace(e);
        auto it = b.edge_basis.find(e);
        if (it != b.edge_basis.end())
            for (const auto& vec : it->second) out.R[e].insert(pos.at(vec));
        for (const auto& vec : detail::range_vectors(m, b, m.g.edge(e).range)) {
            ColVec image = m.s.at(e).apply(vec);
            out.f[e][pos.at(vec)] = pos.at(image);
        }
    }
    RawBranching raw{out.n, out.D, {}, {}};
    for (const auto& [e, pts] : out.R) raw.R[m.g.edge(e).name] = pts;
    for (const auto& [e, pairs] : out.f) {
        auto& list = raw.f[m.g.edge(e).name];
        for (const auto& [from, to] : pairs) list.emplace_back(from, to);
    }
    BranchingSystem validated = validate_bs(m.g, raw);
    if (!is_perfect_bs(validated))
        throw Error("internal: extracted branching system is not perfect");
    return validated;
}

// The composite basis-to-path map: basis index to trajectory target, with
// injectivity and single-class-surjectivity flags.
struct PhiMap {
    BranchingSystem system;
    std::map<int, BasisPath> table;
    std::vector<ColVec> basis_vectors;  // indexed like the table
    bool injective = false;
    bool single_class = false;
    bool onto_class = false;
    std::optional<EquivClass> cls;
};

inline PhiMap phi_map(const MatrixRep& m, const BasisAssignment& b) {
    BranchingSystem bs = extract_bs(m, b);
    MorphismMap t = compute_t(bs);
    PhiMap out{bs, t.targets, {}, true, false, false, std::nullopt};

    out.basis_vectors.resize(static_cast<size_t>(bs.n));
    std::vector<std::pair<Vertex, ColVec>> flat;
    for (const auto& v : m.g.vertex_names())
        for (const auto& vec : detail::vertex_vectors(m, b, Vertex::named(v)))
            flat.emplace_back(Vertex::named(v), vec);
    for (const auto& [v, basis] : b.sink_basis)
        if (v.is_family_member())
            for (const auto& vec : basis) flat.emplace_back(v, vec);
    for (size_t i = 0; i < flat.size(); ++i) out.basis_vectors[i] = flat[i].second;

    std::set<BasisPath, BasisPathLess> image;
    for (const auto& [x, p] : out.table) {
        (void)x;
        if (!image.insert(p).second) out.injective = false;
    }
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& p : image) classes.insert(tail_class(m.g, p));
    out.single_class = classes.size() == 1;
    if (out.single_class) {
        out.cls = *classes.begin();
        if (class_members(m.g, *out.cls, 0).finite) {
            auto members = full_class_members(m.g, *out.cls);
            out.onto_class = members.size() == image.size() &&
                             std::all_of(members.begin(), members.end(),
                                         [&](const BasisPath& p) { return image.count(p) > 0; });
        }
    }
    return out;
}

// Irreducibility per the classification: the basis-to-path map must be a
// bijection onto a single finite class. Reducible verdicts return an explicit
// invariant subspace, verified before returning.
struct IrredVerdict {
    bool irreducible = false;
    std::optional<EquivClass> cls;
    std::vector<ColVec> invariant_basis;  // proper nonzero invariant subspace when reducible
    std::string reason;
    long long module_rank = 0;
    long long class_size = 0;  // when a single class is hit
};

namespace detail {

inline bool subspace_invariant(const MatrixRep& m, const std::vector<ColVec>& basis) {
    SpanBuilder span(m.ring, m.dim);
    for (const auto& v : basis) span.add(v);
    auto check = [&](const Matrix& mat) {
        for (const auto& v : basis)
            if (!span.contains(mat.apply(v))) return false;
        return true;
    };
    for (const auto& [v, pv] : m.p) {
        (void)v;
        if (!check(pv)) return false;
    }
    for (const auto& [e, mat] : m.s) {
        (void)e;
        if (!check(mat)) return false;
    }
    for (const auto& [e, mat] : m.t) {
        (void)e;
        if (!check(mat)) return false;
    }
    return true;
}

}  // namespace detail

inline IrredVerdict decide_irreducible(const MatrixRep& m, const BasisAssignment& b) {
    if (!m.ring.is_field())
        throw Error("irreducibility needs a field, not " + m.ring.name());
    PhiMap phi = phi_map(m, b);
    IrredVerdict out;
    out.module_rank = m.dim;
    if (phi.single_class && phi.cls && class_members(m.g, *phi.cls, 0).finite)
        out.class_size = static_cast<long long>(full_class_members(m.g, *phi.cls).size());

    if (phi.injective && phi.single_class && phi.onto_class) {
        out.irreducible = true;
        out.cls = phi.cls;
        return out;
    }

    out.irreducible = false;
    out.cls = phi.cls;
    if (!phi.single_class) {
        // span of the preimage of the first image class
        std::set<EquivClass, EquivClassLess> classes;
        for (const auto& [x, p] : phi.table) {
            (void)x;
            classes.insert(tail_class(m.g, p));
        }
        EquivClass first = *classes.begin();
        for (const auto& [x, p] : phi.table)
            if (tail_class(m.g, p) == first)
                out.invariant_basis.push_back(phi.basis_vectors[static_cast<size_t>(x)]);
        out.reason = "image meets more than one class; the preimage of " +
                     class_literal(m.g, first) + " spans a proper invariant subspace";
    } else if (!phi.injective) {
        // differences across one fiber span an invariant kernel
        std::map<BasisPath, std::vector<int>, BasisPathLess> fibers;
        for (const auto& [x, p] : phi.table) fibers[p].push_back(x);
        for (const auto& [p, xs] : fibers) {
            (void)p;
            for (size_t i = 1; i < xs.size(); ++i) {
                ColVec diff(m.dim, m.ring.zero());
                const ColVec& a = phi.basis_vectors[static_cast<size_t>(xs[0])];
                const ColVec& c = phi.basis_vectors[static_cast<size_t>(xs[i])];
                for (int k = 0; k < m.dim; ++k) diff[k] = m.ring.sub(a[k], c[k]);
                out.invariant_basis.push_back(std::move(diff));
            }
        }
        out.reason = "basis-to-path map is not injective; fiber differences span an invariant "
                     "subspace";
    } else {
        // a perfect system covers the whole image class, so this cannot occur
        throw Error("internal: injective single-class map with a proper image");
    }
    if (!detail::subspace_invariant(m, out.invariant_basis))
        throw Error("internal: reducibility witness failed invariance verification");
    return out;
}

// Searches cyclic subspaces generated by coordinate vectors under the
// generator matrices. Finding nothing is not a proof of irreducibility.
inline std::optional<std::vector<ColVec>> find_invariant_submodule(const MatrixRep& m) {
    if (!m.ring.is_field())
        throw Error("invariant subspace search needs a field, not " + m.ring.name());
    std::vector<const Matrix*> gens;
    for (const auto& [v, pv] : m.p) {
        (void)v;
        gens.push_back(&pv);
    }
    for (const auto& [e, mat] : m.s) {
        (void)e;
        gens.push_back(&mat);
    }
    for (const auto& [e, mat] : m.t) {
        (void)e;
        gens.push_back(&mat);
    }
    for (int start = 0; start < m.dim; ++start) {
        ColVec seed(m.dim, m.ring.zero());
        seed[start] = m.ring.one();
        SpanBuilder span(m.ring, m.dim);
        span.add(seed);
        std::vector<ColVec> basis{seed};
        for (size_t i = 0; i < basis.size(); ++i) {
            ColVec current = basis[i];
            for (const Matrix* gen : gens) {
                ColVec image = gen->apply(current);
                if (span.add(image)) basis.push_back(std::move(image));
            }
        }
        if (span.rank() < m.dim) return basis;
    }
    return std::nullopt;
}

}  // namespace ulpa
