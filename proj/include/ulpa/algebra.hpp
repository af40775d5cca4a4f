#pragma once

#include <map>
#include <optional>

#include <ulpa/expr.hpp>
#include <ulpa/paths.hpp>

namespace ulpa {

// A spanning monomial s_alpha p_A s_beta^*. Stored normalized: A is nonempty
// and contained in the ranges of alpha and beta; empty words stand for the
// absorbed identity side, so ({}, A, {}) is p_A.
struct Monomial {
    std::vector<EdgeId> alpha;
    VertexSet mid;
    std::vector<EdgeId> beta;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.alpha.size() != b.alpha.size()) return a.alpha.size() < b.alpha.size();
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.beta.size() != b.beta.size()) return a.beta.size() < b.beta.size();
        if (a.beta != b.beta) return a.beta < b.beta;
        return cmp(a.mid, b.mid) < 0;
    }
};

// Intersects the middle set into the range constraints; nullopt means the
// monomial is zero and is never stored.
inline std::optional<Monomial> make_monomial(const Ultragraph& g, std::vector<EdgeId> alpha,
                                             VertexSet mid, std::vector<EdgeId> beta) {
    if (!alpha.empty()) mid = set_intersect(mid, path_range(g, alpha));
    if (!beta.empty()) mid = set_intersect(mid, path_range(g, beta));
    if (mid.is_empty()) return std::nullopt;
    return Monomial{std::move(alpha), std::move(mid), std::move(beta)};
}

// An exact linear combination of spanning monomials.
class AlgebraElement {
public:
    explicit AlgebraElement(Ring ring) : ring_(ring) {}

    static AlgebraElement zero(Ring ring) { return AlgebraElement(ring); }

    static AlgebraElement monomial(Ring ring, const Monomial& m, const Scalar& coeff) {
        AlgebraElement x(ring);
        x.add_term(m, coeff);
        return x;
    }

    const Ring& ring() const { return ring_; }
    const std::map<Monomial, Scalar, MonomialLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Keeps the element canonical modulo the Cuntz-Krieger relation: for each
    // word pair (alpha, beta) the middle sets stored are the level sets of the
    // coefficient function, so lattice identities among projections cancel
    // syntactically.
    void add_term(const Monomial& m, const Scalar& coeff) {
        if (ring_.is_zero(coeff)) return;
        std::vector<std::pair<VertexSet, Scalar>> pieces;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first.alpha == m.alpha && it->first.beta == m.beta) {
                pieces.emplace_back(it->first.mid, it->second);
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
        std::vector<std::pair<VertexSet, Scalar>> refined;
        VertexSet remainder = m.mid;
        for (const auto& [set, c] : pieces) {
            VertexSet overlap = set_intersect(set, m.mid);
            VertexSet keep = set_difference(set, m.mid);
            if (!keep.is_empty()) refined.emplace_back(keep, c);
            if (!overlap.is_empty()) refined.emplace_back(overlap, ring_.add(c, coeff));
            remainder = set_difference(remainder, set);
        }
        if (!remainder.is_empty()) refined.emplace_back(remainder, coeff);
        std::map<Scalar, VertexSet> levels;
        for (const auto& [set, c] : refined) {
            if (ring_.is_zero(c)) continue;
            auto [it, inserted] = levels.emplace(c, set);
            if (!inserted) it->second = set_union(it->second, set);
        }
        for (const auto& [c, set] : levels) terms_.emplace(Monomial{m.alpha, set, m.beta}, c);
    }

    friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

private:
    Ring ring_;
    std::map<Monomial, Scalar, MonomialLess> terms_;
};

inline void check_same_ring(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.ring() == b.ring())) throw Error("ring mismatch");
}

inline AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
    check_same_ring(a, b);
    AlgebraElement out = a;
    for (const auto& [m, c] : b.terms()) out.add_term(m, c);
    return out;
}

inline AlgebraElement negate(const AlgebraElement& a) {
    AlgebraElement out(a.ring());
    for (const auto& [m, c] : a.terms()) out.add_term(m, a.ring().neg(c));
    return out;
}

inline AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
    return add(a, negate(b));
}

inline AlgebraElement scale(const AlgebraElement& a, const Scalar& c) {
    AlgebraElement out(a.ring());
    for (const auto& [m, coeff] : a.terms()) out.add_term(m, a.ring().mul(coeff, c));
    return out;
}

namespace detail {

inline bool word_has_prefix(const std::vector<EdgeId>& w, const std::vector<EdgeId>& prefix) {
    if (prefix.size() > w.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), w.begin());
}

// (s_a p_A s_b^*)(s_c p_B s_d^*): resolved by comparing b against c. The
// inner product s_b^* s_c collapses to a projection or a single word; the
// result is again a spanning monomial or zero.
inline std::optional<Monomial> monomial_product(const Ultragraph& g, const Monomial& x,
                                                const Monomial& y) {
    const auto& b = x.beta;
    const auto& c = y.alpha;
    if (word_has_prefix(b, c)) {
        // b = c.tau: result is s_a p_A s_(d.tau)^* when s(tau) lies in B.
        std::vector<EdgeId> tau(b.begin() + static_cast<long>(c.size()), b.end());
        if (tau.empty()) return make_monomial(g, x.alpha, set_intersect(x.mid, y.mid), y.beta);
        if (!y.mid.contains(path_source(g, tau))) return std::nullopt;
        std::vector<EdgeId> beta = y.beta;
        if (!beta.empty() && !path_range(g, beta).contains(path_source(g, tau)))
            return std::nullopt;
        beta.insert(beta.end(), tau.begin(), tau.end());
        return make_monomial(g, x.alpha, x.mid, std::move(beta));
    }
    if (word_has_prefix(c, b)) {
        // c = b.tau: result is s_(a.tau) p_B s_d^* when s(tau) lies in A.
        std::vector<EdgeId> tau(c.begin() + static_cast<long>(b.size()), c.end());
        if (!x.mid.contains(path_source(g, tau))) return std::nullopt;
        std::vector<EdgeId> alpha = x.alpha;
        if (!alpha.empty() && !path_range(g, alpha).contains(path_source(g, tau)))
            return std::nullopt;
        alpha.insert(alpha.end(), tau.begin(), tau.end());
        return make_monomial(g, std::move(alpha), y.mid, y.beta);
    }
    return std::nullopt;
}

}  // namespace detail

inline AlgebraElement mul(const Ultragraph& g, const AlgebraElement& a, const AlgebraElement& b) {
    check_same_ring(a, b);
    AlgebraElement out(a.ring());
    for (const auto& [mx, cx] : a.terms())
        for (const auto& [my, cy] : b.terms())
            if (auto m = detail::monomial_product(g, mx, my))
                out.add_term(*m, a.ring().mul(cx, cy));
    return out;
}

// The multiplicative identity p_{G0}, available when G0 is itself a
// generalized vertex.
inline AlgebraElement unit_element(const Ultragraph& g, const Ring& ring) {
    VertexSet all = g.all_vertices();
    if (all.is_empty() || !gzero_membership(g, all))
        throw Error("this algebra has no identity: G0 is not a generalized vertex");
    return AlgebraElement::monomial(ring, Monomial{{}, all, {}}, ring.one());
}

// Evaluates an expression tree into spanning form. Projections of unions are
// handled by the descriptor set algebra directly; products resolve through
// monomial_product; relation (4) is never applied here.
inline AlgebraElement reduce_to_spanning(const Ultragraph& g, const ExprPtr& ast,
                                         const Ring& ring) {
    if (const auto* s = std::get_if<ExprScalar>(&ast->node))
        return scale(unit_element(g, ring), s->value);
    if (const auto* s = std::get_if<ExprGenS>(&ast->node)) {
        EdgeId e = g.edge_id(s->edge);
        return AlgebraElement::monomial(ring, Monomial{{e}, g.edge(e).range, {}}, ring.one());
    }
    if (const auto* t = std::get_if<ExprGenT>(&ast->node)) {
        EdgeId e = g.edge_id(t->edge);
        return AlgebraElement::monomial(ring, Monomial{{}, g.edge(e).range, {e}}, ring.one());
    }
    if (const auto* p = std::get_if<ExprGenP>(&ast->node)) {
        VertexSet a = resolve(g, p->set);
        if (a.is_empty()) return AlgebraElement::zero(ring);
        return AlgebraElement::monomial(ring, Monomial{{}, a, {}}, ring.one());
    }
    const auto& b = std::get<ExprBinary>(ast->node);
    AlgebraElement left = reduce_to_spanning(g, b.left, ring);
    AlgebraElement right = reduce_to_spanning(g, b.right, ring);
    switch (b.op) {
        case '+': return add(left, right);
        case '-': return sub(left, right);
        default: return mul(g, left, right);
    }
}

// Expands p_v through the Cuntz-Krieger relation at a regular vertex: every
// monomial whose middle set contains v is split as p_(A minus v) + p_v, and
// the p_v part becomes a sum over the edges leaving v.
inline AlgebraElement apply_ck2(const Ultragraph& g, const AlgebraElement& x, const Vertex& v) {
    if (v.is_family_member()) throw Error(v.display() + " is a family member: relation (4) needs a regular vertex");
    g.check_vertex(v);
    if (g.is_sink(v)) throw Error(v.display() + " is a sink: relation (4) needs a regular vertex");

    AlgebraElement out(x.ring());
    for (const auto& [m, c] : x.terms()) {
        if (!m.mid.contains(v)) {
            out.add_term(m, c);
            continue;
        }
        VertexSet rest = remove_vertex(m.mid, v);
        if (!rest.is_empty())
            if (auto mm = make_monomial(g, m.alpha, rest, m.beta)) out.add_term(*mm, c);
        for (EdgeId e : g.out_edges(v.id)) {
            std::vector<EdgeId> alpha = m.alpha, beta = m.beta;
            alpha.push_back(e);
            beta.push_back(e);
            if (auto mm = make_monomial(g, std::move(alpha), g.edge(e).range, std::move(beta)))
                out.add_term(*mm, c);
        }
    }
    return out;
}

inline std::string display(const Ultragraph& g, const AlgebraElement& x) {
    if (x.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : x.terms()) {
        if (!first) out += " + ";
        first = false;
        out += x.ring().str(c);
        for (EdgeId e : m.alpha) out += "*s(" + g.edge(e).name + ")";
        out += "*p(" + ulpa::display(m.mid) + ")";
        for (auto it = m.beta.rbegin(); it != m.beta.rend(); ++it)
            out += "*t(" + g.edge(*it).name + ")";
    }
    return out;
}

}  // namespace ulpa
