#pragma once

#include <map>
#include <optional>
#include <variant>

#include <ulpa/algebra.hpp>
#include <ulpa/matrix.hpp>
#include <ulpa/paths.hpp>

namespace ulpa {

// A finitely supported vector in the free module on canonical basis paths.
struct Vector {
    Ring ring;
    std::map<BasisPath, Scalar, BasisPathLess> entries;

    explicit Vector(Ring r) : ring(r) {}

    bool is_zero() const { return entries.empty(); }

    void add(const BasisPath& x, const Scalar& c) {
        if (ring.is_zero(c)) return;
        auto [it, inserted] = entries.emplace(x, c);
        if (!inserted) {
            it->second = ring.add(it->second, c);
            if (ring.is_zero(it->second)) entries.erase(it);
        }
    }

    friend bool operator==(const Vector&, const Vector&) = default;
};

inline Vector unit_vector(Ring ring, const BasisPath& x) {
    Vector v(ring);
    v.add(x, ring.one());
    return v;
}

inline Vector add(const Vector& a, const Vector& b) {
    if (!(a.ring == b.ring)) throw Error("ring mismatch");
    Vector out = a;
    for (const auto& [x, c] : b.entries) out.add(x, c);
    return out;
}

inline Vector sub(const Vector& a, const Vector& b) {
    if (!(a.ring == b.ring)) throw Error("ring mismatch");
    Vector out = a;
    for (const auto& [x, c] : b.entries) out.add(x, a.ring.neg(c));
    return out;
}

inline Vector scale(const Vector& a, const Scalar& c) {
    Vector out(a.ring);
    for (const auto& [x, coeff] : a.entries) out.add(x, a.ring.mul(coeff, c));
    return out;
}

// Generators of the acting algebra.
struct GenP {
    VertexSet set;
};
struct GenS {
    EdgeId e;
};
struct GenSstar {
    EdgeId e;
};
using Generator = std::variant<GenP, GenS, GenSstar>;

// Action of a single generator on a basis vector. P_A filters by source,
// S_e prepends, S_e^* strips a matching first edge (degenerate sink pairs go
// to zero).
inline Vector act_generator(const Ultragraph& g, const Generator& gen, const BasisPath& x,
                            Ring ring) {
    Vector out(ring);
    if (const auto* p = std::get_if<GenP>(&gen)) {
        if (p->set.contains(source_of(g, x))) out.add(x, ring.one());
        return out;
    }
    if (const auto* s = std::get_if<GenS>(&gen)) {
        if (auto moved = prepend(g, s->e, x)) out.add(*moved, ring.one());
        return out;
    }
    const auto& t = std::get<GenSstar>(gen);
    auto first = first_edge(x);
    if (first && *first == t.e) out.add(strip_first(g, x), ring.one());
    return out;
}

// Where the monomial sends a basis path (coefficient is always one): strip
// beta, gate on the middle set, prepend alpha.
inline std::optional<BasisPath> monomial_move(const Ultragraph& g, const Monomial& m,
                                              const BasisPath& x) {
    if (!has_prefix(x, m.beta)) return std::nullopt;
    BasisPath rest = strip_prefix(g, x, m.beta.size());
    if (!m.mid.contains(source_of(g, rest))) return std::nullopt;
    for (auto it = m.alpha.rbegin(); it != m.alpha.rend(); ++it) {
        auto moved = prepend(g, *it, rest);
        if (!moved) return std::nullopt;
        rest = *moved;
    }
    return rest;
}

inline Vector act(const Ultragraph& g, const AlgebraElement& a, const Vector& v) {
    if (!(a.ring() == v.ring)) throw Error("ring mismatch");
    Vector out(v.ring);
    for (const auto& [m, c] : a.terms())
        for (const auto& [x, coeff] : v.entries)
            if (auto moved = monomial_move(g, m, x)) out.add(*moved, v.ring.mul(c, coeff));
    return out;
}

// Evaluates an expression tree by composing generator actions; an independent
// route from reduce_to_spanning + act, used as an oracle in the tests.
inline Vector ast_act(const Ultragraph& g, const ExprPtr& ast, const Vector& v) {
    if (const auto* s = std::get_if<ExprScalar>(&ast->node)) {
        Vector filtered(v.ring);
        for (const auto& [x, c] : v.entries) {
            Vector gen = act_generator(g, GenP{g.all_vertices()}, x, v.ring);
            for (const auto& [y, cy] : gen.entries) filtered.add(y, v.ring.mul(c, cy));
        }
        return scale(filtered, s->value);
    }
    auto apply_gen = [&](const Generator& gen) {
        Vector out(v.ring);
        for (const auto& [x, c] : v.entries) {
            Vector moved = act_generator(g, gen, x, v.ring);
            for (const auto& [y, cy] : moved.entries) out.add(y, v.ring.mul(c, cy));
        }
        return out;
    };
    if (const auto* s = std::get_if<ExprGenS>(&ast->node)) return apply_gen(GenS{g.edge_id(s->edge)});
    if (const auto* t = std::get_if<ExprGenT>(&ast->node))
        return apply_gen(GenSstar{g.edge_id(t->edge)});
    if (const auto* p = std::get_if<ExprGenP>(&ast->node)) return apply_gen(GenP{resolve(g, p->set)});
    const auto& b = std::get<ExprBinary>(ast->node);
    if (b.op == '*') return ast_act(g, b.left, ast_act(g, b.right, v));
    Vector left = ast_act(g, b.left, v);
    Vector right = ast_act(g, b.right, v);
    return b.op == '+' ? add(left, right) : sub(left, right);
}

// --- class restrictions -----------------------------------------------------

// Generator labels for restricted-representation matrices.
struct GenKey {
    enum class Type { p_vertex, p_range, s, s_star };
    Type type;
    Vertex v;       // p_vertex only
    EdgeId e = -1;  // others

    friend bool operator==(const GenKey&, const GenKey&) = default;
    friend auto operator<=>(const GenKey&, const GenKey&) = default;
};

inline std::string display(const Ultragraph& g, const GenKey& k) {
    switch (k.type) {
        case GenKey::Type::p_vertex: return "p(" + k.v.display() + ")";
        case GenKey::Type::p_range: return "p(r(" + g.edge(k.e).name + "))";
        case GenKey::Type::s: return "s(" + g.edge(k.e).name + ")";
        default: return "t(" + g.edge(k.e).name + ")";
    }
}

// The restriction of the path representation to one finite tail class, as
// explicit matrices in the ordered member basis.
struct ClassRep {
    std::vector<EquivClass> classes;  // one entry, or several after direct sums
    Ring ring;
    std::vector<BasisPath> basis;
    std::map<GenKey, Matrix> mats;

    const Matrix& matrix(const GenKey& k) const {
        auto it = mats.find(k);
        if (it == mats.end()) throw Error("no such generator matrix");
        return it->second;
    }
};

namespace detail {

inline std::vector<GenKey> generator_keys(const Ultragraph& g,
                                          const std::vector<EquivClass>& classes) {
    std::vector<GenKey> keys;
    for (const auto& v : g.vertex_names())
        keys.push_back(GenKey{GenKey::Type::p_vertex, Vertex::named(v), -1});
    std::set<Vertex> family_sinks;
    for (const auto& c : classes)
        if (const auto* sc = std::get_if<SinkClassTag>(&c)) {
            Vertex v = vertex_of(g, sc->v);
            if (v.is_family_member()) family_sinks.insert(v);
        }
    for (const auto& v : family_sinks) keys.push_back(GenKey{GenKey::Type::p_vertex, v, -1});
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        keys.push_back(GenKey{GenKey::Type::p_range, Vertex{}, e});
        keys.push_back(GenKey{GenKey::Type::s, Vertex{}, e});
        keys.push_back(GenKey{GenKey::Type::s_star, Vertex{}, e});
    }
    return keys;
}

inline Generator generator_of(const Ultragraph& g, const GenKey& k) {
    switch (k.type) {
        case GenKey::Type::p_vertex: return GenP{VertexSet::single(k.v)};
        case GenKey::Type::p_range: return GenP{g.edge(k.e).range};
        case GenKey::Type::s: return GenS{k.e};
        default: return GenSstar{k.e};
    }
}

}  // namespace detail

inline ClassRep restrict_class(const Ultragraph& g, const EquivClass& c, Ring ring) {
    ClassMembers probe = class_members(g, c, 0);
    if (!probe.finite) throw Error("infinite class: " + class_literal(g, c));
    ClassRep rep{{c}, ring, full_class_members(g, c), {}};
    std::map<BasisPath, int, BasisPathLess> pos;
    for (size_t i = 0; i < rep.basis.size(); ++i) pos[rep.basis[i]] = static_cast<int>(i);

    int n = static_cast<int>(rep.basis.size());
    for (const auto& key : detail::generator_keys(g, rep.classes)) {
        Matrix m(ring, n, n);
        Generator gen = detail::generator_of(g, key);
        for (int j = 0; j < n; ++j) {
            Vector image = act_generator(g, gen, rep.basis[j], ring);
            for (const auto& [y, coeff] : image.entries) {
                auto it = pos.find(y);
                if (it == pos.end())
                    throw Error("class is not invariant under " + display(g, key));
                m.at(it->second, j) = coeff;
            }
        }
        rep.mats.emplace(key, std::move(m));
    }
    return rep;
}

inline ClassRep direct_sum(const ClassRep& a, const ClassRep& b) {
    if (!(a.ring == b.ring)) throw Error("ring mismatch");
    ClassRep out{a.classes, a.ring, a.basis, {}};
    out.classes.insert(out.classes.end(), b.classes.begin(), b.classes.end());
    out.basis.insert(out.basis.end(), b.basis.begin(), b.basis.end());
    int na = static_cast<int>(a.basis.size());
    int nb = static_cast<int>(b.basis.size());
    std::set<GenKey> keys;
    for (const auto& [k, m] : a.mats) keys.insert(k);
    for (const auto& [k, m] : b.mats) keys.insert(k);
    for (const auto& k : keys) {
        Matrix m(a.ring, na + nb, na + nb);
        if (auto it = a.mats.find(k); it != a.mats.end())
            for (int i = 0; i < na; ++i)
                for (int j = 0; j < na; ++j) m.at(i, j) = it->second.at(i, j);
        if (auto it = b.mats.find(k); it != b.mats.end())
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j) m.at(na + i, na + j) = it->second.at(i, j);
        out.mats.emplace(k, std::move(m));
    }
    return out;
}

// Dimension of {X : X M = M X for every generator matrix M}, by exact
// elimination. The generators generate the acting algebra, so commuting with
// them suffices.
inline long long commutant_dim(const ClassRep& c) {
    if (!c.ring.is_field()) throw Error("commutant computation needs a field, not " + c.ring.name());
    int n = static_cast<int>(c.basis.size());
    SpanBuilder rows(c.ring, n * n);
    for (const auto& [key, m] : c.mats) {
        (void)key;
        // equation (i,j): sum_k X[i][k] m[k][j] - m[i][k] X[k][j] = 0
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Scalar> row(static_cast<size_t>(n) * n, c.ring.zero());
                for (int k = 0; k < n; ++k) {
                    row[static_cast<size_t>(i) * n + k] =
                        c.ring.add(row[static_cast<size_t>(i) * n + k], m.at(k, j));
                    row[static_cast<size_t>(k) * n + j] =
                        c.ring.sub(row[static_cast<size_t>(k) * n + j], m.at(i, k));
                }
                rows.add(std::move(row));
            }
    }
    return static_cast<long long>(n) * n - rows.rank();
}

// Dimension of {U : m2 U = U m1 over all generators}; zero certifies that no
// invertible intertwiner exists.
inline long long intertwiner_dim(const ClassRep& c1, const ClassRep& c2) {
    if (!(c1.ring == c2.ring)) throw Error("ring mismatch");
    if (!c1.ring.is_field())
        throw Error("intertwiner computation needs a field, not " + c1.ring.name());
    int n1 = static_cast<int>(c1.basis.size());
    int n2 = static_cast<int>(c2.basis.size());
    std::set<GenKey> keys;
    for (const auto& [k, m] : c1.mats) keys.insert(k);
    for (const auto& [k, m] : c2.mats) keys.insert(k);

    SpanBuilder rows(c1.ring, n1 * n2);
    Matrix z1(c1.ring, n1, n1), z2(c1.ring, n2, n2);
    for (const auto& key : keys) {
        const Matrix& m1 = c1.mats.count(key) ? c1.mats.at(key) : z1;
        const Matrix& m2 = c2.mats.count(key) ? c2.mats.at(key) : z2;
        // U is n2 x n1; equation (i,j): sum_k m2[i][k] U[k][j] - U[i][k] m1[k][j] = 0
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n1; ++j) {
                std::vector<Scalar> row(static_cast<size_t>(n1) * n2, c1.ring.zero());
                for (int k = 0; k < n2; ++k)
                    row[static_cast<size_t>(k) * n1 + j] =
                        c1.ring.add(row[static_cast<size_t>(k) * n1 + j], m2.at(i, k));
                for (int k = 0; k < n1; ++k)
                    row[static_cast<size_t>(i) * n1 + k] =
                        c1.ring.sub(row[static_cast<size_t>(i) * n1 + k], m1.at(k, j));
                rows.add(std::move(row));
            }
    }
    return static_cast<long long>(n1) * n2 - rows.rank();
}

// --- irreducibility witnesses ----------------------------------------------

struct IsolationWitness {
    AlgebraElement monomial;
    BasisPath target;
    Scalar coefficient;
};

// From a nonzero vector supported in one class, a monomial that maps it to a
// nonzero multiple of a single basis vector. Tail classes strip the shortest
// prefix length that separates the supports; sink classes strip a stem of
// maximal length.
inline IsolationWitness isolate_witness(const Ultragraph& g, const Vector& v) {
    if (!v.ring.is_field()) throw Error("isolation witness needs a field, not " + v.ring.name());
    if (v.is_zero()) throw Error("zero vector has no isolation witness");

    std::vector<BasisPath> supports;
    for (const auto& [x, c] : v.entries) supports.push_back(x);
    EquivClass cls = tail_class(g, supports.front());
    for (const auto& x : supports)
        if (!(tail_class(g, x) == cls)) throw Error("vector mixes distinct classes");

    auto finish = [&](const Monomial& m) {
        AlgebraElement elem = AlgebraElement::monomial(v.ring, m, v.ring.one());
        Vector moved = act(g, elem, v);
        if (moved.entries.size() != 1)
            throw Error("internal: isolation witness did not isolate");
        const auto& [target, coeff] = *moved.entries.begin();
        return IsolationWitness{elem, target, coeff};
    };

    if (std::holds_alternative<SinkClassTag>(cls)) {
        // Deepest stem wins; strip it.
        const SinkPath* best = nullptr;
        for (const auto& x : supports) {
            const auto& s = std::get<SinkPath>(x);
            if (!best || s.stem.size() > best->stem.size() ||
                (s.stem.size() == best->stem.size() && s.stem < best->stem))
                best = &s;
        }
        Vertex sink = vertex_of(g, best->sink);
        if (best->stem.empty())
            return finish(Monomial{{}, VertexSet::single(sink), {}});
        return finish(*make_monomial(g, {}, VertexSet::single(sink), best->stem));
    }

    if (supports.size() == 1) {
        Vertex src = source_of(g, supports.front());
        return finish(Monomial{{}, VertexSet::single(src), {}});
    }

    // Shortest prefix length at which all supports differ.
    size_t len = 1;
    auto distinct_at = [&](size_t n) {
        std::set<std::vector<EdgeId>> seen;
        for (const auto& x : supports)
            if (!seen.insert(unroll(std::get<LassoPath>(x), n)).second) return false;
        return true;
    };
    while (!distinct_at(len)) ++len;
    std::vector<EdgeId> chosen = unroll(std::get<LassoPath>(supports.front()), len);
    for (const auto& x : supports)
        chosen = std::min(chosen, unroll(std::get<LassoPath>(x), len));
    return finish(*make_monomial(g, {}, path_range(g, chosen), chosen));
}

// A monomial moving b_z exactly to b_x inside one class.
inline AlgebraElement transitivity_witness(const Ultragraph& g, const BasisPath& x,
                                           const BasisPath& z, Ring ring) {
    EquivClass cx = tail_class(g, x), cz = tail_class(g, z);
    if (!(cx == cz)) throw Error("paths lie in distinct classes");

    if (BasisPathLess{}(x, z) == false && BasisPathLess{}(z, x) == false) {
        Vertex src = source_of(g, x);
        return AlgebraElement::monomial(ring, Monomial{{}, VertexSet::single(src), {}}, ring.one());
    }

    if (std::holds_alternative<SinkClassTag>(cx)) {
        const auto& sx = std::get<SinkPath>(x);
        const auto& sz = std::get<SinkPath>(z);
        Vertex sink = vertex_of(g, sx.sink);
        auto m = make_monomial(g, sx.stem, VertexSet::single(sink), sz.stem);
        if (!m) throw Error("internal: empty transitivity witness");
        return AlgebraElement::monomial(ring, *m, ring.one());
    }

    // Align both paths on the canonical rotation of the shared cycle.
    const auto& cycle = std::get<TailClassTag>(cx).cycle;
    auto align = [&](const LassoPath& l) {
        std::vector<EdgeId> prefix = l.stem;
        for (size_t k = 0; k < l.cycle.size(); ++k) {
            if (detail::rotate_left(l.cycle, k) == cycle) {
                prefix.insert(prefix.end(), l.cycle.begin(), l.cycle.begin() + static_cast<long>(k));
                return prefix;
            }
        }
        throw Error("internal: cycle rotation not found");
    };
    std::vector<EdgeId> alpha = align(std::get<LassoPath>(x));
    std::vector<EdgeId> beta = align(std::get<LassoPath>(z));
    Vertex start = path_source(g, cycle);
    auto m = make_monomial(g, alpha, VertexSet::single(start), beta);
    if (!m) throw Error("internal: empty transitivity witness");
    return AlgebraElement::monomial(ring, *m, ring.one());
}

// --- the function-space model ------------------------------------------------

// Finitely supported maps on the path set, acted on through the induced
// branching-system formulas. Mirrors Vector but the generator actions go
// through characteristic functions and the shift bijections.
struct FunctionModelVector {
    Ring ring;
    std::map<BasisPath, Scalar, BasisPathLess> entries;

    explicit FunctionModelVector(Ring r) : ring(r) {}
    friend bool operator==(const FunctionModelVector&, const FunctionModelVector&) = default;
};

inline FunctionModelVector model_iso(const Vector& v) {
    FunctionModelVector out(v.ring);
    out.entries = v.entries;
    return out;
}

inline Vector model_iso_inverse(const FunctionModelVector& f) {
    Vector out(f.ring);
    out.entries = f.entries;
    return out;
}

// chi_{B_A} . phi
inline FunctionModelVector fm_act_p(const Ultragraph& g, const VertexSet& a,
                                    const FunctionModelVector& f) {
    FunctionModelVector out(f.ring);
    for (const auto& [x, c] : f.entries)
        if (a.contains(source_of(g, x))) out.entries.emplace(x, c);
    return out;
}

// chi_{L_e} . (phi o f_e^{-1}): delta_x contributes at e.x when defined.
inline FunctionModelVector fm_act_s(const Ultragraph& g, EdgeId e, const FunctionModelVector& f) {
    FunctionModelVector out(f.ring);
    for (const auto& [x, c] : f.entries)
        if (auto y = prepend(g, e, x)) out.entries.emplace(*y, c);
    return out;
}

// chi_{B_r(e)} . (phi o f_e): delta_x contributes at the e-stripped path.
inline FunctionModelVector fm_act_sstar(const Ultragraph& g, EdgeId e,
                                        const FunctionModelVector& f) {
    FunctionModelVector out(f.ring);
    for (const auto& [x, c] : f.entries) {
        auto first = first_edge(x);
        if (first && *first == e) out.entries.emplace(strip_first(g, x), c);
    }
    return out;
}

// Action of a full element in the function model, composed generator by
// generator (monomials are never multiplied out on this route).
inline FunctionModelVector fm_act(const Ultragraph& g, const AlgebraElement& a,
                                  const FunctionModelVector& f) {
    FunctionModelVector out(f.ring);
    auto accumulate = [&](const FunctionModelVector& part, const Scalar& coeff) {
        for (const auto& [x, c] : part.entries) {
            Scalar v = f.ring.mul(c, coeff);
            auto [it, inserted] = out.entries.emplace(x, v);
            if (!inserted) {
                it->second = f.ring.add(it->second, v);
                if (f.ring.is_zero(it->second)) out.entries.erase(it);
            }
        }
    };
    for (const auto& [m, coeff] : a.terms()) {
        FunctionModelVector cur = f;
        for (EdgeId e : m.beta) cur = fm_act_sstar(g, e, cur);
        cur = fm_act_p(g, m.mid, cur);
        for (auto it = m.alpha.rbegin(); it != m.alpha.rend(); ++it) cur = fm_act_s(g, *it, cur);
        accumulate(cur, coeff);
    }
    return out;
}

inline std::string display(const Ultragraph& g, const Vector& v) {
    if (v.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [x, c] : v.entries) {
        if (!first) out += " + ";
        first = false;
        out += v.ring.str(c) + "*(" + path_literal(g, x) + ")";
    }
    return out;
}

// Parses the vector literal syntax produced by display: terms
// "coeff*(path)" joined by '+'.
inline Vector parse_vector(const Ultragraph& g, const std::string& text, Ring ring) {
    Vector out(ring);
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    while (true) {
        skip_ws();
        if (pos >= text.size()) break;
        size_t star = text.find('*', pos);
        Scalar coeff = ring.one();
        if (star != std::string::npos) {
            std::string head = detail::trim(text.substr(pos, star - pos));
            bool numeric = !head.empty();
            for (char ch : head)
                if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '-' && ch != '/')
                    numeric = false;
            if (numeric) {
                coeff = ring.parse_scalar(head);
                pos = star + 1;
            }
        }
        skip_ws();
        if (pos >= text.size() || text[pos] != '(') throw Error("bad vector literal: expected '('");
        int depth = 0;
        size_t end = pos;
        for (; end < text.size(); ++end) {
            if (text[end] == '(') ++depth;
            if (text[end] == ')' && --depth == 0) break;
        }
        if (depth != 0) throw Error("bad vector literal: unbalanced parentheses");
        std::string inner = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        skip_ws();
        // a trailing ^w belongs to the path, not the wrapper
        if (pos + 1 < text.size() && text[pos] == '^' && text[pos + 1] == 'w') {
            inner = text.substr(end - inner.size() - 1, inner.size() + 2) + "^w";
            pos += 2;
            skip_ws();
        }
        // a top-level comma means the parentheses were the sink pair's own
        int d = 0;
        bool top_comma = false;
        for (char ch : inner) {
            if (ch == '(') ++d;
            else if (ch == ')') --d;
            else if (ch == ',' && d == 0) top_comma = true;
        }
        BasisPath path = parse_path(g, top_comma ? "(" + inner + ")" : inner);
        out.add(path, coeff);
        if (pos >= text.size()) break;
        if (text[pos] != '+') throw Error("bad vector literal: expected '+'");
        ++pos;
    }
    return out;
}

}  // namespace ulpa
