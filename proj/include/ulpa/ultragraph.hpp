#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <ulpa/vertex_set.hpp>

namespace ulpa {

using EdgeId = int;

struct RawEdge {
    std::string name;
    std::string source;
    VertexSet range;
};

struct RawUltragraph {
    std::vector<std::string> vertices;
    std::vector<std::string> families;
    std::vector<RawEdge> edges;
};

// A finite ultragraph: named vertices, indexed sink families, and edges whose
// range is a vertex set. Immutable after validation; declaration order fixes
// all enumeration orders.
class Ultragraph {
public:
    struct Edge {
        std::string name;
        std::string source;
        VertexSet range;
    };

    static Ultragraph validate(const RawUltragraph& raw) {
        Ultragraph g;
        for (const auto& v : raw.vertices) {
            if (g.vertex_pos_.count(v)) throw Error("duplicate vertex name: " + v);
            if (g.family_pos_.count(v)) throw Error("name used for both vertex and family: " + v);
            g.vertex_pos_[v] = static_cast<int>(g.vertices_.size());
            g.vertices_.push_back(v);
        }
        for (const auto& f : raw.families) {
            if (g.family_pos_.count(f)) throw Error("duplicate family name: " + f);
            if (g.vertex_pos_.count(f)) throw Error("name used for both vertex and family: " + f);
            g.family_pos_[f] = static_cast<int>(g.families_.size());
            g.families_.push_back(f);
        }
        for (const auto& e : raw.edges) {
            if (g.edge_pos_.count(e.name)) throw Error("duplicate edge name: " + e.name);
            if (g.family_pos_.count(e.source))
                throw Error("edge " + e.name + " sourced at a family member: family members are sinks");
            if (!g.vertex_pos_.count(e.source))
                throw Error("edge " + e.name + " has undeclared source vertex: " + e.source);
            if (e.range.is_empty()) throw Error("edge " + e.name + " has empty range");
            for (const auto& v : e.range.named)
                if (!g.vertex_pos_.count(v))
                    throw Error("range of edge " + e.name + " references undeclared vertex: " + v);
            for (const auto& [fam, part] : e.range.families) {
                (void)part;
                if (!g.family_pos_.count(fam))
                    throw Error("range of edge " + e.name + " references undeclared family: " + fam);
            }
            g.edge_pos_[e.name] = static_cast<int>(g.edges_.size());
            g.edges_.push_back(Edge{e.name, e.source, e.range});
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            g.out_edges_[g.edges_[e].source].push_back(e);
        return g;
    }

    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }

    EdgeId edge_id(const std::string& name) const {
        auto it = edge_pos_.find(name);
        if (it == edge_pos_.end()) throw Error("unknown edge name: " + name);
        return it->second;
    }
    bool has_edge(const std::string& name) const { return edge_pos_.count(name) > 0; }

    const std::vector<std::string>& vertex_names() const { return vertices_; }
    const std::vector<std::string>& family_names() const { return families_; }

    bool has_vertex(const std::string& v) const { return vertex_pos_.count(v) > 0; }
    bool has_family(const std::string& f) const { return family_pos_.count(f) > 0; }
    int vertex_pos(const std::string& v) const { return vertex_pos_.at(v); }
    int family_pos(const std::string& f) const { return family_pos_.at(f); }

    const std::vector<EdgeId>& out_edges(const std::string& vertex) const {
        static const std::vector<EdgeId> none;
        auto it = out_edges_.find(vertex);
        return it == out_edges_.end() ? none : it->second;
    }

    bool is_sink(const Vertex& v) const {
        if (v.is_family_member()) return true;
        return out_edges(v.id).empty();
    }

    // Checks that a vertex literal refers to declared structure.
    void check_vertex(const Vertex& v) const {
        if (v.is_family_member()) {
            if (!has_family(v.id)) throw Error("unknown family: " + v.id);
        } else if (!has_vertex(v.id)) {
            throw Error("unknown vertex: " + v.id);
        }
    }

    // The full vertex set G0.
    VertexSet all_vertices() const {
        VertexSet s;
        for (const auto& v : vertices_) s.named.insert(v);
        for (const auto& f : families_) s.families[f] = FamilyPart{true, {}};
        return s;
    }

    // One index beyond the largest family index mentioned in any range.
    long long default_family_bound() const {
        long long m = 0;
        for (const auto& e : edges_)
            for (const auto& [fam, part] : e.range.families) {
                (void)fam;
                if (!part.indices.empty()) m = std::max(m, *part.indices.rbegin());
            }
        return m + 1;
    }

private:
    Ultragraph() = default;

    std::vector<std::string> vertices_;
    std::vector<std::string> families_;
    std::vector<Edge> edges_;
    std::map<std::string, int> vertex_pos_, family_pos_, edge_pos_;
    std::map<std::string, std::vector<EdgeId>> out_edges_;
};

inline VertexSet sinks(const Ultragraph& g) {
    VertexSet s;
    for (const auto& v : g.vertex_names())
        if (g.out_edges(v).empty()) s.named.insert(v);
    for (const auto& f : g.family_names()) s.families[f] = FamilyPart{true, {}};
    return s;
}

// Membership in the collection of generalized vertices generated by the
// singletons and the edge ranges. In descriptor form this reduces to: a
// cofinite slice of family F occurs only when some range carries a cofinite
// F-slice. Validated against a brute-force closure oracle in the tests.
inline bool gzero_membership(const Ultragraph& g, const VertexSet& a) {
    if (a.is_empty()) throw Error("the empty set is not a generalized vertex");
    for (const auto& [fam, part] : a.families) {
        if (!part.cofinite) continue;
        bool witnessed = false;
        for (EdgeId e = 0; e < g.edge_count() && !witnessed; ++e) {
            auto it = g.edge(e).range.families.find(fam);
            witnessed = it != g.edge(e).range.families.end() && it->second.cofinite;
        }
        if (!witnessed) return false;
    }
    return true;
}

struct ConditionLReport {
    bool satisfied = true;
    std::vector<EdgeId> witness;  // an exitless cycle when not satisfied
};

namespace detail {

// An exit for the closed path: an alternative edge leaving some range, or a
// sink inside some range. Successor indices wrap around.
inline bool closed_path_has_exit(const Ultragraph& g, const std::vector<EdgeId>& path) {
    int k = static_cast<int>(path.size());
    for (int i = 0; i < k; ++i) {
        const VertexSet& range = g.edge(path[i]).range;
        if (!range.families.empty()) return true;  // family members are sinks
        for (const auto& v : range.named)
            if (g.is_sink(Vertex::named(v))) return true;
        EdgeId next = path[(i + 1) % k];
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (e != next && range.named.count(g.edge(e).source)) return true;
    }
    return false;
}

inline void simple_cycles_from(const Ultragraph& g, EdgeId start, std::vector<EdgeId>& path,
                               std::set<std::string>& sources, std::vector<std::vector<EdgeId>>& out) {
    const VertexSet& range = g.edge(path.back()).range;
    if (range.named.count(g.edge(start).source)) out.push_back(path);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (e < start) continue;  // each cycle reported from its least edge
        const std::string& src = g.edge(e).source;
        if (sources.count(src) || !range.named.count(src)) continue;
        path.push_back(e);
        sources.insert(src);
        simple_cycles_from(g, start, path, sources, out);
        sources.erase(src);
        path.pop_back();
    }
}

inline std::vector<std::vector<EdgeId>> simple_cycles(const Ultragraph& g) {
    std::vector<std::vector<EdgeId>> out;
    for (EdgeId start = 0; start < g.edge_count(); ++start) {
        std::vector<EdgeId> path{start};
        std::set<std::string> sources{g.edge(start).source};
        simple_cycles_from(g, start, path, sources, out);
    }
    return out;
}

}  // namespace detail

// Every closed path contains a cycle, and an exit of that cycle exits the
// closed path, so deciding on cycles suffices.
inline ConditionLReport condition_l(const Ultragraph& g) {
    for (const auto& cycle : detail::simple_cycles(g))
        if (!detail::closed_path_has_exit(g, cycle)) return ConditionLReport{false, cycle};
    return ConditionLReport{true, {}};
}

}  // namespace ulpa
