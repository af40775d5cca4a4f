#pragma once

#include <ulpa/matrix.hpp>
#include <ulpa/representation.hpp>

namespace ulpa {

// A representation given by explicit generator matrices. Projections are
// stored per vertex; p_A for a composite set is the sum of its stored vertex
// projections (the vertex projections are orthogonal idempotents, so the sum
// respects intersections and unions).
struct MatrixRep {
    Ultragraph g;
    Ring ring;
    int dim = 0;
    std::map<Vertex, Matrix> p;
    std::map<EdgeId, Matrix> s, t;

    Matrix p_vertex(const Vertex& v) const {
        auto it = p.find(v);
        if (it != p.end()) return it->second;
        return Matrix(ring, dim, dim);
    }

    Matrix p_of(const VertexSet& a) const {
        Matrix out(ring, dim, dim);
        for (const auto& [v, m] : p)
            if (a.contains(v)) out = out + m;
        return out;
    }
};

struct RelationCheck {
    bool ok = true;
    std::string first_failure;
};

// Checks the defining relations as exact matrix identities: orthogonal
// idempotent projections, source/range absorption, t_e s_f = delta p_r(e),
// and the Cuntz-Krieger sum at every regular vertex.
inline RelationCheck verify_matrix_rep(const MatrixRep& m) {
    auto fail = [](std::string what) { return RelationCheck{false, std::move(what)}; };
    for (const auto& [u, pu] : m.p) {
        if (pu.rows() != m.dim || pu.cols() != m.dim)
            return fail("dimension mismatch in p(" + u.display() + ")");
        if (!(pu * pu == pu)) return fail("relation (1): p(" + u.display() + ") is not idempotent");
        for (const auto& [v, pv] : m.p) {
            if (u == v) continue;
            if (!(pu * pv).is_zero())
                return fail("relation (1): p(" + u.display() + ")p(" + v.display() + ") != 0");
        }
    }
    for (EdgeId e = 0; e < m.g.edge_count(); ++e) {
        const auto its = m.s.find(e);
        const auto itt = m.t.find(e);
        if (its == m.s.end() || itt == m.t.end())
            return fail("missing matrix for edge " + m.g.edge(e).name);
        const Matrix& se = its->second;
        const Matrix& te = itt->second;
        if (se.rows() != m.dim || se.cols() != m.dim || te.rows() != m.dim || te.cols() != m.dim)
            return fail("dimension mismatch for edge " + m.g.edge(e).name);
        Matrix p_src = m.p_of(VertexSet::single(Vertex::named(m.g.edge(e).source)));
        Matrix p_rng = m.p_of(m.g.edge(e).range);
        if (!(p_src * se == se))
            return fail("relation (2): p(s(" + m.g.edge(e).name + "))s = s fails");
        if (!(se * p_rng == se))
            return fail("relation (2): s p(r(" + m.g.edge(e).name + ")) = s fails");
        if (!(p_rng * te == te))
            return fail("relation (2): p(r(" + m.g.edge(e).name + "))t = t fails");
        if (!(te * p_src == te))
            return fail("relation (2): t p(s(" + m.g.edge(e).name + ")) = t fails");
        for (EdgeId f = 0; f < m.g.edge_count(); ++f) {
            auto itf = m.s.find(f);
            if (itf == m.s.end()) return fail("missing matrix for edge " + m.g.edge(f).name);
            Matrix prod = te * itf->second;
            if (e == f) {
                if (!(prod == p_rng))
                    return fail("relation (3): t(" + m.g.edge(e).name + ")s(" + m.g.edge(e).name +
                                ") != p(r(" + m.g.edge(e).name + "))");
            } else if (!prod.is_zero()) {
                return fail("relation (3): t(" + m.g.edge(e).name + ")s(" + m.g.edge(f).name +
                            ") != 0");
            }
        }
    }
    for (const auto& v : m.g.vertex_names()) {
        const auto& out = m.g.out_edges(v);
        if (out.empty()) continue;
        Matrix sum(m.ring, m.dim, m.dim);
        for (EdgeId e : out) sum = sum + m.s.at(e) * m.t.at(e);
        if (!(sum == m.p_vertex(Vertex::named(v))))
            return fail("relation (4): p(" + v + ") != sum of s t over edges leaving " + v);
    }
    return RelationCheck{};
}

// Exports a restricted class representation as explicit matrices.
inline MatrixRep class_to_matrix_rep(const Ultragraph& g, const ClassRep& c) {
    MatrixRep m{g, c.ring, static_cast<int>(c.basis.size()), {}, {}, {}};
    for (const auto& [key, mat] : c.mats) {
        switch (key.type) {
            case GenKey::Type::p_vertex: m.p.emplace(key.v, mat); break;
            case GenKey::Type::s: m.s.emplace(key.e, mat); break;
            case GenKey::Type::s_star: m.t.emplace(key.e, mat); break;
            default: break;  // range projections are derived from the vertex ones
        }
    }
    return m;
}

// The generator matrices of a MatrixRep in ClassRep form, for commutant and
// intertwiner computations.
inline std::map<GenKey, Matrix> generator_matrices(const MatrixRep& m) {
    std::map<GenKey, Matrix> out;
    for (const auto& [v, mat] : m.p) out.emplace(GenKey{GenKey::Type::p_vertex, v, -1}, mat);
    for (const auto& [e, mat] : m.s) out.emplace(GenKey{GenKey::Type::s, Vertex{}, e}, mat);
    for (const auto& [e, mat] : m.t) out.emplace(GenKey{GenKey::Type::s_star, Vertex{}, e}, mat);
    for (EdgeId e = 0; e < m.g.edge_count(); ++e)
        out.emplace(GenKey{GenKey::Type::p_range, Vertex{}, e}, m.p_of(m.g.edge(e).range));
    return out;
}

}  // namespace ulpa
