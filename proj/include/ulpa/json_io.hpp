#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include <ulpa/branching.hpp>
#include <ulpa/matrix_rep.hpp>
#include <ulpa/permutative.hpp>
#include <ulpa/representation.hpp>

namespace ulpa {

using json = nlohmann::ordered_json;

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("malformed file " + path + ": parse error at byte " + std::to_string(e.byte));
    }
}

inline VertexSet vertex_set_from_json(const json& j) {
    VertexSet s;
    if (j.contains("named"))
        for (const auto& v : j.at("named")) s.named.insert(v.get<std::string>());
    if (j.contains("families"))
        for (const auto& [fam, desc] : j.at("families").items()) {
            FamilyPart part;
            if (desc.contains("cofinite")) {
                part.cofinite = true;
                for (const auto& i : desc.at("cofinite")) part.indices.insert(i.get<long long>());
            } else if (desc.contains("finite")) {
                for (const auto& i : desc.at("finite")) part.indices.insert(i.get<long long>());
            } else {
                throw Error("family descriptor needs \"finite\" or \"cofinite\": " + fam);
            }
            s.families[fam] = part;
        }
    s.normalize();
    return s;
}

inline json vertex_set_to_json(const VertexSet& s) {
    json j = json::object();
    if (!s.named.empty()) j["named"] = s.named;
    if (!s.families.empty()) {
        json fams = json::object();
        for (const auto& [fam, part] : s.families)
            fams[fam] = json{{part.cofinite ? "cofinite" : "finite", part.indices}};
        j["families"] = fams;
    }
    return j;
}

inline Vertex vertex_from_key(const std::string& key) {
    auto lb = key.find('[');
    if (lb == std::string::npos) return Vertex::named(key);
    if (key.back() != ']') throw Error("bad vertex key: " + key);
    long long idx = 0;
    try {
        idx = std::stoll(key.substr(lb + 1, key.size() - lb - 2));
    } catch (const std::exception&) {
        throw Error("bad vertex key: " + key);
    }
    return Vertex::family_member(key.substr(0, lb), idx);
}

}  // namespace detail

inline Ultragraph ultragraph_from_json(const json& j) {
    RawUltragraph raw;
    if (j.contains("vertices"))
        for (const auto& v : j.at("vertices")) raw.vertices.push_back(v.get<std::string>());
    if (j.contains("families"))
        for (const auto& f : j.at("families")) raw.families.push_back(f.get<std::string>());
    if (j.contains("edges"))
        for (const auto& e : j.at("edges")) {
            RawEdge edge;
            edge.name = e.at("name").get<std::string>();
            edge.source = e.at("source").get<std::string>();
            edge.range = detail::vertex_set_from_json(e.at("range"));
            raw.edges.push_back(std::move(edge));
        }
    return Ultragraph::validate(raw);
}

inline Ultragraph load_ultragraph(const std::string& path) {
    return ultragraph_from_json(detail::read_json_file(path));
}

// The ultragraph file a branching-system or matrix-representation file points
// at, resolved to an absolute path.
inline std::string referenced_ultragraph(const std::string& path) {
    json j = detail::read_json_file(path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    return std::filesystem::absolute(base / j.at("ultragraph").get<std::string>()).string();
}

inline json ultragraph_to_json(const Ultragraph& g) {
    json j;
    j["vertices"] = g.vertex_names();
    j["families"] = g.family_names();
    json edges = json::array();
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        edges.push_back(json{{"name", g.edge(e).name},
                             {"source", g.edge(e).source},
                             {"range", detail::vertex_set_to_json(g.edge(e).range)}});
    j["edges"] = edges;
    return j;
}

// {"ultragraph": "<file>", "n": 2, "D": {...}, "R": {...}, "f": {...}} with
// the ultragraph path resolved relative to the branching-system file.
inline BranchingSystem load_branching_system(const std::string& path) {
    json j = detail::read_json_file(path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::string gpath = (base / j.at("ultragraph").get<std::string>()).string();
    Ultragraph g = load_ultragraph(gpath);

    RawBranching raw;
    raw.n = j.at("n").get<int>();
    if (j.contains("D"))
        for (const auto& [key, pts] : j.at("D").items()) {
            auto& slot = raw.D[detail::vertex_from_key(key)];
            for (const auto& p : pts) slot.insert(p.get<int>());
        }
    if (j.contains("R"))
        for (const auto& [key, pts] : j.at("R").items()) {
            auto& slot = raw.R[key];
            for (const auto& p : pts) slot.insert(p.get<int>());
        }
    if (j.contains("f"))
        for (const auto& [key, pairs] : j.at("f").items()) {
            auto& slot = raw.f[key];
            for (const auto& pr : pairs) slot.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
        }
    return validate_bs(g, raw);
}

inline json branching_to_json(const BranchingSystem& b, const std::string& ultragraph_ref) {
    json j;
    j["ultragraph"] = ultragraph_ref;
    j["n"] = b.n;
    json d = json::object();
    for (const auto& [v, pts] : b.D)
        if (!pts.empty()) d[v.display()] = pts;
    j["D"] = d;
    json r = json::object();
    for (const auto& [e, pts] : b.R)
        if (!pts.empty()) r[b.g.edge(e).name] = pts;
    j["R"] = r;
    json f = json::object();
    for (const auto& [e, pairs] : b.f) {
        if (pairs.empty()) continue;
        json list = json::array();
        for (const auto& [from, to] : pairs) list.push_back(json::array({from, to}));
        f[b.g.edge(e).name] = list;
    }
    j["f"] = f;
    return j;
}

namespace detail {

inline Matrix matrix_from_json(const json& j, const Ring& ring, int dim) {
    Matrix m(ring, dim, dim);
    if (static_cast<int>(j.size()) != dim) throw Error("matrix row count differs from dim");
    for (int i = 0; i < dim; ++i) {
        const auto& row = j.at(i);
        if (static_cast<int>(row.size()) != dim) throw Error("matrix column count differs from dim");
        for (int k = 0; k < dim; ++k) {
            const auto& cell = row.at(k);
            if (cell.is_string())
                m.at(i, k) = ring.parse_scalar(cell.get<std::string>());
            else
                m.at(i, k) = ring.from_int(cell.get<long long>());
        }
    }
    return m;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.ring().str(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace detail

// {"ultragraph": "<file>", "ring": "Q", "dim": d, "p": {...}, "s": {...},
// "t": {...}} with scalars as strings.
inline MatrixRep load_matrix_rep(const std::string& path) {
    json j = detail::read_json_file(path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::string gpath = (base / j.at("ultragraph").get<std::string>()).string();
    Ultragraph g = load_ultragraph(gpath);
    Ring ring = Ring::parse(j.at("ring").get<std::string>());
    int dim = j.at("dim").get<int>();

    MatrixRep m{g, ring, dim, {}, {}, {}};
    if (j.contains("p"))
        for (const auto& [key, mat] : j.at("p").items())
            m.p.emplace(detail::vertex_from_key(key), detail::matrix_from_json(mat, ring, dim));
    for (const auto& v : m.g.vertex_names())
        m.p.try_emplace(Vertex::named(v), Matrix(ring, dim, dim));
    if (j.contains("s"))
        for (const auto& [key, mat] : j.at("s").items())
            m.s.emplace(g.edge_id(key), detail::matrix_from_json(mat, ring, dim));
    if (j.contains("t"))
        for (const auto& [key, mat] : j.at("t").items())
            m.t.emplace(g.edge_id(key), detail::matrix_from_json(mat, ring, dim));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (!m.s.count(e) || !m.t.count(e))
            throw Error("missing matrix for edge " + g.edge(e).name);
    return m;
}

inline json matrix_rep_to_json(const MatrixRep& m, const std::string& ultragraph_ref) {
    json j;
    j["ultragraph"] = ultragraph_ref;
    j["ring"] = m.ring.name();
    j["dim"] = m.dim;
    json p = json::object();
    for (const auto& [v, mat] : m.p) p[v.display()] = detail::matrix_to_json(mat);
    j["p"] = p;
    json s = json::object(), t = json::object();
    for (const auto& [e, mat] : m.s) s[m.g.edge(e).name] = detail::matrix_to_json(mat);
    for (const auto& [e, mat] : m.t) t[m.g.edge(e).name] = detail::matrix_to_json(mat);
    j["s"] = s;
    j["t"] = t;
    return j;
}

// {"B": {"e": [[...]], "w[1]": [[...]]}}: edge keys give edge bases, sink
// vertex keys give sink bases.
inline BasisAssignment load_basis_assignment(const std::string& path, const MatrixRep& m) {
    json j = detail::read_json_file(path);
    BasisAssignment b;
    for (const auto& [key, vectors] : j.at("B").items()) {
        std::vector<ColVec> list;
        for (const auto& vec : vectors) {
            ColVec v;
            for (const auto& cell : vec)
                v.push_back(cell.is_string() ? m.ring.parse_scalar(cell.get<std::string>())
                                             : m.ring.from_int(cell.get<long long>()));
            if (static_cast<int>(v.size()) != m.dim)
                throw Error("basis vector length differs from dim");
            list.push_back(std::move(v));
        }
        if (m.g.has_edge(key))
            b.edge_basis[m.g.edge_id(key)] = std::move(list);
        else
            b.sink_basis[detail::vertex_from_key(key)] = std::move(list);
    }
    return b;
}

inline json class_rep_to_json(const Ultragraph& g, const ClassRep& c) {
    json j;
    json classes = json::array();
    for (const auto& cls : c.classes) classes.push_back(class_literal(g, cls));
    j["classes"] = classes;
    j["ring"] = c.ring.name();
    json basis = json::array();
    for (const auto& p : c.basis) basis.push_back(path_literal(g, p));
    j["basis"] = basis;
    json mats = json::object();
    for (const auto& [key, m] : c.mats) mats[display(g, key)] = detail::matrix_to_json(m);
    j["matrices"] = mats;
    return j;
}

}  // namespace ulpa
