#pragma once

#include <map>
#include <set>

#include <ulpa/matrix_rep.hpp>
#include <ulpa/paths.hpp>

namespace ulpa {

// A finite branching system on X = {0..n-1}: domain sets per vertex, range
// sets per edge, and an explicit bijection f_e from D_r(e) onto R_e. D is
// stored on vertices only; D_A is the union over the vertices of A.
struct BranchingSystem {
    Ultragraph g;
    int n = 0;
    std::map<Vertex, std::set<int>> D;
    std::map<EdgeId, std::set<int>> R;
    std::map<EdgeId, std::map<int, int>> f;

    std::set<int> d_of(const VertexSet& a) const {
        std::set<int> out;
        for (const auto& [v, pts] : D)
            if (a.contains(v)) out.insert(pts.begin(), pts.end());
        return out;
    }

    std::set<int> r_of(EdgeId e) const {
        auto it = R.find(e);
        return it == R.end() ? std::set<int>{} : it->second;
    }

    std::optional<Vertex> vertex_of_point(int x) const {
        for (const auto& [v, pts] : D)
            if (pts.count(x)) return v;
        return std::nullopt;
    }

    std::optional<EdgeId> edge_of_point(int x) const {
        for (const auto& [e, pts] : R)
            if (pts.count(x)) return e;
        return std::nullopt;
    }

    int f_inverse(EdgeId e, int y) const {
        for (const auto& [from, to] : f.at(e))
            if (to == y) return from;
        throw Error("point " + std::to_string(y) + " is not in the image of f_" + g.edge(e).name);
    }
};

struct RawBranching {
    int n = 0;
    std::map<Vertex, std::set<int>> D;
    std::map<std::string, std::set<int>> R;
    std::map<std::string, std::vector<std::pair<int, int>>> f;
};

// All five axioms of a branching system, collected as one message per
// violation.
inline std::vector<std::string> branching_violations(const Ultragraph& g, const RawBranching& raw) {
    std::vector<std::string> out;
    auto in_x = [&](int p) { return p >= 0 && p < raw.n; };

    for (const auto& [v, pts] : raw.D) {
        try {
            g.check_vertex(v);
        } catch (const Error& e) {
            out.push_back(std::string("D: ") + e.what());
            continue;
        }
        for (int p : pts)
            if (!in_x(p))
                out.push_back("D_" + v.display() + " contains " + std::to_string(p) +
                              " outside X");
    }
    for (const auto& [name, pts] : raw.R) {
        if (!g.has_edge(name)) {
            out.push_back("R: unknown edge " + name);
            continue;
        }
        for (int p : pts)
            if (!in_x(p))
                out.push_back("R_" + name + " contains " + std::to_string(p) + " outside X");
    }
    for (const auto& [name, pairs] : raw.f) {
        (void)pairs;
        if (!g.has_edge(name)) out.push_back("f: unknown edge " + name);
    }
    if (!out.empty()) return out;

    BranchingSystem b{g, raw.n, raw.D, {}, {}};
    for (const auto& [name, pts] : raw.R) b.R[g.edge_id(name)] = pts;
    for (const auto& [name, pairs] : raw.f) {
        auto& m = b.f[g.edge_id(name)];
        for (const auto& [from, to] : pairs) {
            if (m.count(from))
                out.push_back("axiom (5): f_" + name + " maps " + std::to_string(from) + " twice");
            m[from] = to;
        }
    }

    // (1) edge ranges are pairwise disjoint
    for (auto i = b.R.begin(); i != b.R.end(); ++i)
        for (auto j = std::next(i); j != b.R.end(); ++j)
            for (int p : i->second)
                if (j->second.count(p)) {
                    out.push_back("axiom (1): R_" + g.edge(i->first).name + " and R_" +
                                  g.edge(j->first).name + " share point " + std::to_string(p));
                    break;
                }

    // (2) vertex domains are pairwise disjoint (D_A then respects the lattice)
    for (auto i = b.D.begin(); i != b.D.end(); ++i)
        for (auto j = std::next(i); j != b.D.end(); ++j)
            for (int p : i->second)
                if (j->second.count(p)) {
                    out.push_back("axiom (2): D_" + i->first.display() + " and D_" +
                                  j->first.display() + " share point " + std::to_string(p));
                    break;
                }

    // (3) R_e inside D_s(e)
    for (const auto& [e, pts] : b.R) {
        std::set<int> ds = b.d_of(VertexSet::single(Vertex::named(g.edge(e).source)));
        for (int p : pts)
            if (!ds.count(p)) {
                out.push_back("axiom (3): R_" + g.edge(e).name + " is not inside D_" +
                              g.edge(e).source);
                break;
            }
    }

    // (4) D_v is the union of R_e over edges leaving a regular v
    for (const auto& v : g.vertex_names()) {
        const auto& edges = g.out_edges(v);
        if (edges.empty()) continue;
        std::set<int> uni;
        for (EdgeId e : edges) {
            auto r = b.r_of(e);
            uni.insert(r.begin(), r.end());
        }
        std::set<int> dv = b.d_of(VertexSet::single(Vertex::named(v)));
        if (uni != dv)
            out.push_back("axiom (4): D_" + v + " differs from the union of R_e over s^-1(" + v +
                          ")");
    }

    // (5) each f_e is a bijection from D_r(e) onto R_e
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        std::set<int> dom = b.d_of(g.edge(e).range);
        std::set<int> rng = b.r_of(e);
        std::map<int, int> fe = b.f.count(e) ? b.f.at(e) : std::map<int, int>{};
        std::set<int> covered, image;
        for (const auto& [from, to] : fe) {
            covered.insert(from);
            if (!image.insert(to).second)
                out.push_back("axiom (5): f_" + g.edge(e).name + " is not injective at " +
                              std::to_string(to));
            if (!dom.count(from))
                out.push_back("axiom (5): f_" + g.edge(e).name + " defined at " +
                              std::to_string(from) + " outside D_r(e)");
            if (!rng.count(to))
                out.push_back("axiom (5): f_" + g.edge(e).name + " maps into " +
                              std::to_string(to) + " outside R_e");
        }
        if (covered != dom)
            out.push_back("axiom (5): f_" + g.edge(e).name + " does not cover D_r(e)");
        if (image != rng)
            out.push_back("axiom (5): f_" + g.edge(e).name + " is not onto R_e");
    }
    return out;
}

inline BranchingSystem validate_bs(const Ultragraph& g, const RawBranching& raw) {
    auto violations = branching_violations(g, raw);
    if (!violations.empty()) {
        std::string msg = "invalid branching system:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw Error(msg);
    }
    BranchingSystem b{g, raw.n, raw.D, {}, {}};
    for (const auto& [name, pts] : raw.R) b.R[g.edge_id(name)] = pts;
    for (const auto& [name, pairs] : raw.f) {
        auto& m = b.f[g.edge_id(name)];
        for (const auto& [from, to] : pairs) m[from] = to;
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        b.R.try_emplace(e);
        b.f.try_emplace(e);
    }
    return b;
}

// Perfect: every point lies under some vertex, and the Cuntz-Krieger
// decomposition D_v = union of R_e holds at every non-sink vertex (the
// validator already enforces the latter for regular vertices).
inline bool is_perfect_bs(const BranchingSystem& b) {
    std::set<int> covered;
    for (const auto& [v, pts] : b.D) {
        (void)v;
        covered.insert(pts.begin(), pts.end());
    }
    if (static_cast<int>(covered.size()) != b.n) return false;
    for (const auto& v : b.g.vertex_names()) {
        const auto& edges = b.g.out_edges(v);
        if (edges.empty()) continue;
        std::set<int> uni;
        for (EdgeId e : edges) {
            auto r = b.r_of(e);
            uni.insert(r.begin(), r.end());
        }
        if (uni != b.d_of(VertexSet::single(Vertex::named(v)))) return false;
    }
    return true;
}

// The branching system carried by one finite tail class: points are the class
// members, domains collect members by source, ranges by first edge, and f_e
// prepends e.
inline BranchingSystem canonical_bs(const Ultragraph& g, const EquivClass& c) {
    const std::vector<BasisPath> members = full_class_members(g, c);

    std::map<BasisPath, int, BasisPathLess> pos;
    for (size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);

    BranchingSystem b{g, static_cast<int>(members.size()), {}, {}, {}};
    for (size_t i = 0; i < members.size(); ++i)
        b.D[source_of(g, members[i])].insert(static_cast<int>(i));
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        b.R.try_emplace(e);
        b.f.try_emplace(e);
        for (size_t i = 0; i < members.size(); ++i) {
            auto fe = first_edge(members[i]);
            if (fe && *fe == e) b.R[e].insert(static_cast<int>(i));
            if (auto moved = prepend(g, e, members[i])) {
                auto it = pos.find(*moved);
                if (it == pos.end()) throw Error("internal: class not closed under prepending");
                b.f[e][static_cast<int>(i)] = it->second;
            }
        }
    }
    return b;
}

// The induced representation on the free module over X: projections are
// domain indicators and the partial isometries are the 0/1 matrices of f_e
// and its inverse. The relations are verified before returning.
inline MatrixRep induce_rep(const BranchingSystem& b, Ring ring) {
    MatrixRep m{b.g, ring, b.n, {}, {}, {}};
    for (const auto& v : b.g.vertex_names()) {
        Matrix pv(ring, b.n, b.n);
        auto it = b.D.find(Vertex::named(v));
        if (it != b.D.end())
            for (int p : it->second) pv.at(p, p) = ring.one();
        m.p.emplace(Vertex::named(v), std::move(pv));
    }
    for (const auto& [v, pts] : b.D) {
        if (!v.is_family_member()) continue;
        Matrix pv(ring, b.n, b.n);
        for (int p : pts) pv.at(p, p) = ring.one();
        m.p.emplace(v, std::move(pv));
    }
    for (EdgeId e = 0; e < b.g.edge_count(); ++e) {
        Matrix se(ring, b.n, b.n), te(ring, b.n, b.n);
        if (b.f.count(e))
            for (const auto& [from, to] : b.f.at(e)) {
                se.at(to, from) = ring.one();
                te.at(from, to) = ring.one();
            }
        m.s.emplace(e, std::move(se));
        m.t.emplace(e, std::move(te));
    }
    RelationCheck check = verify_matrix_rep(m);
    if (!check.ok)
        throw Error("induced matrices violate a relation (invalid system): " + check.first_failure);
    return m;
}

// The trajectory map into the path space: walk f_e^{-1} until a sink is
// reached or a point repeats; a repeat closes the cycle of a lasso.
struct MorphismMap {
    BranchingSystem source;
    std::map<int, BasisPath> targets;
};

inline BasisPath trajectory_target(const BranchingSystem& b, int start) {
    std::vector<int> points{start};
    std::vector<EdgeId> edges;
    while (true) {
        int cur = points.back();
        auto v = b.vertex_of_point(cur);
        if (!v) throw Error("point " + std::to_string(cur) + " lies in no D_v: system not perfect");
        if (b.g.is_sink(*v)) return SinkPath{edges, sink_key(b.g, *v)};
        auto e = b.edge_of_point(cur);
        if (!e)
            throw Error("point " + std::to_string(cur) +
                        " lies in no R_e: perfectness violated mid-walk");
        edges.push_back(*e);
        int next = b.f_inverse(*e, cur);
        auto seen = std::find(points.begin(), points.end(), next);
        if (seen != points.end()) {
            size_t j = static_cast<size_t>(seen - points.begin());
            std::vector<EdgeId> stem(edges.begin(), edges.begin() + static_cast<long>(j));
            std::vector<EdgeId> cycle(edges.begin() + static_cast<long>(j), edges.end());
            return canonical_lasso(b.g, stem, cycle);
        }
        points.push_back(next);
    }
}

inline MorphismMap compute_t(const BranchingSystem& b) {
    if (!is_perfect_bs(b)) throw Error("trajectory map needs a perfect branching system");
    MorphismMap m{b, {}};
    for (int x = 0; x < b.n; ++x) m.targets.emplace(x, trajectory_target(b, x));
    return m;
}

struct MorphismCheck {
    bool ok = true;
    std::string first_failure;
};

// Morphism conditions against the canonical system on the path space, plus
// the preimage equalities that hold automatically for perfect sources.
inline MorphismCheck verify_morphism(const MorphismMap& m) {
    const BranchingSystem& b = m.source;
    const Ultragraph& g = b.g;
    auto fail = [](std::string w) { return MorphismCheck{false, std::move(w)}; };

    for (const auto& [e, pts] : b.R)
        for (int x : pts) {
            auto fe = first_edge(m.targets.at(x));
            if (!fe || *fe != e)
                return fail("T(R_" + g.edge(e).name + ") is not inside L_" + g.edge(e).name);
        }
    for (const auto& [v, pts] : b.D)
        for (int x : pts)
            if (!(source_of(g, m.targets.at(x)) == v))
                return fail("T(D_" + v.display() + ") is not inside B_" + v.display());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const VertexSet& range = g.edge(e).range;
        for (int x : b.d_of(range))
            if (!range.contains(source_of(g, m.targets.at(x))))
                return fail("T(D_r(" + g.edge(e).name + ")) is not inside B_r(" + g.edge(e).name +
                            ")");
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!b.f.count(e)) continue;
        for (const auto& [x, y] : b.f.at(e)) {
            auto expected = prepend(g, e, m.targets.at(x));
            if (!expected || !(*expected == m.targets.at(y)))
                return fail("T(f_" + g.edge(e).name + "(x)) != " + g.edge(e).name +
                            ".T(x) at x = " + std::to_string(x));
        }
    }
    if (is_perfect_bs(b)) {
        for (int x = 0; x < b.n; ++x) {
            auto fe = first_edge(m.targets.at(x));
            for (EdgeId e = 0; e < g.edge_count(); ++e) {
                bool in_l = fe && *fe == e;
                bool in_r = b.r_of(e).count(x) > 0;
                if (in_l != in_r)
                    return fail("preimage equality T^-1(L_" + g.edge(e).name + ") = R_" +
                                g.edge(e).name + " fails at " + std::to_string(x));
            }
            Vertex src = source_of(g, m.targets.at(x));
            for (const auto& [v, pts] : b.D) {
                bool in_b = src == v;
                bool in_d = pts.count(x) > 0;
                if (in_b != in_d)
                    return fail("preimage equality T^-1(B_" + v.display() + ") = D_" + v.display() +
                                " fails at " + std::to_string(x));
            }
            for (EdgeId e = 0; e < g.edge_count(); ++e) {
                bool in_b = g.edge(e).range.contains(src);
                bool in_d = b.d_of(g.edge(e).range).count(x) > 0;
                if (in_b != in_d)
                    return fail("preimage equality T^-1(B_r(" + g.edge(e).name + ")) = D_r(" +
                                g.edge(e).name + ") fails at " + std::to_string(x));
            }
        }
    }
    return MorphismCheck{};
}

// Whenever a path lies in the image of the trajectory map, its whole class
// does. False reports carry the first missing member; infinite image classes
// can only fail (a finite image cannot cover them).
struct ClosureCheck {
    bool closed = true;
    bool bounded_only = false;  // an image class was infinite
    std::string detail;
};

inline ClosureCheck image_class_closure(const MorphismMap& m) {
    const Ultragraph& g = m.source.g;
    std::set<BasisPath, BasisPathLess> image;
    for (const auto& [x, p] : m.targets) {
        (void)x;
        image.insert(p);
    }
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& p : image) classes.insert(tail_class(g, p));
    for (const auto& c : classes) {
        if (!class_members(g, c, 0).finite)
            return ClosureCheck{false, true,
                                "image class " + class_literal(g, c) +
                                    " is infinite; a finite image cannot contain it"};
        for (const auto& member : full_class_members(g, c))
            if (!image.count(member))
                return ClosureCheck{false, false,
                                    "class member " + path_literal(g, member) +
                                        " is missing from the image"};
    }
    return ClosureCheck{};
}

// Irreducibility of the induced representation: the trajectory map must be a
// bijection onto a single finite class.
struct BsIrredVerdict {
    bool isomorphic = false;
    std::optional<EquivClass> cls;
    std::string reason;
};

inline BsIrredVerdict bs_irreducibility(const BranchingSystem& b) {
    MorphismMap m = compute_t(b);
    const Ultragraph& g = b.g;

    std::map<BasisPath, int, BasisPathLess> seen;
    for (const auto& [x, p] : m.targets) {
        auto [it, inserted] = seen.emplace(p, x);
        if (!inserted)
            return BsIrredVerdict{false, std::nullopt,
                                  "trajectory map is not injective: points " +
                                      std::to_string(it->second) + " and " + std::to_string(x) +
                                      " both map to " + path_literal(g, p)};
    }
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& [x, p] : m.targets) {
        (void)x;
        classes.insert(tail_class(g, p));
    }
    if (classes.empty()) return BsIrredVerdict{false, std::nullopt, "empty system"};
    if (classes.size() > 1)
        return BsIrredVerdict{false, std::nullopt, "image meets more than one class"};
    EquivClass c = *classes.begin();
    if (!class_members(g, c, 0).finite)
        return BsIrredVerdict{false, c, "image class is infinite; the image is a proper subset"};
    for (const auto& member : full_class_members(g, c))
        if (!seen.count(member))
            return BsIrredVerdict{false, c,
                                  "image misses class member " + path_literal(g, member)};
    return BsIrredVerdict{true, c, ""};
}

// Disjoint union on a shared ultragraph; the second copy is shifted past the
// first.
inline BranchingSystem disjoint_union(const BranchingSystem& a, const BranchingSystem& b) {
    BranchingSystem out{a.g, a.n + b.n, a.D, a.R, a.f};
    for (const auto& [v, pts] : b.D)
        for (int p : pts) out.D[v].insert(p + a.n);
    for (const auto& [e, pts] : b.R)
        for (int p : pts) out.R[e].insert(p + a.n);
    for (const auto& [e, pairs] : b.f)
        for (const auto& [from, to] : pairs) out.f[e][from + a.n] = to + a.n;
    return out;
}

// Relabels points so that structurally equal systems compare equal: points
// are ordered by (owning vertex, original index).
inline BranchingSystem normalize_points(const BranchingSystem& b) {
    std::vector<std::pair<Vertex, int>> order;
    std::set<int> placed;
    for (const auto& [v, pts] : b.D)
        for (int p : pts) {
            order.emplace_back(v, p);
            placed.insert(p);
        }
    for (int p = 0; p < b.n; ++p)
        if (!placed.count(p)) order.emplace_back(Vertex{"~", 0}, p);
    std::sort(order.begin(), order.end());
    std::map<int, int> relabel;
    for (size_t i = 0; i < order.size(); ++i) relabel[order[i].second] = static_cast<int>(i);

    BranchingSystem out{b.g, b.n, {}, {}, {}};
    for (const auto& [v, pts] : b.D)
        for (int p : pts) out.D[v].insert(relabel[p]);
    for (const auto& [e, pts] : b.R) {
        out.R.try_emplace(e);
        for (int p : pts) out.R[e].insert(relabel[p]);
    }
    for (const auto& [e, pairs] : b.f) {
        out.f.try_emplace(e);
        for (const auto& [from, to] : pairs) out.f[e][relabel[from]] = relabel[to];
    }
    return out;
}

inline bool bs_equal_normalized(const BranchingSystem& a, const BranchingSystem& b) {
    BranchingSystem na = normalize_points(a), nb = normalize_points(b);
    return na.n == nb.n && na.D == nb.D && na.R == nb.R && na.f == nb.f;
}

}  // namespace ulpa
