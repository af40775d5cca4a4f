#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <ulpa/ring.hpp>

namespace ulpa {

// A vertex is either a named vertex ("u", index 0) or a member of an indexed
// sink family ("w", index >= 1).
struct Vertex {
    std::string id;
    long long index = 0;

    static Vertex named(std::string name) { return Vertex{std::move(name), 0}; }
    static Vertex family_member(std::string family, long long i) {
        if (i < 1) throw Error("family indices start at 1");
        return Vertex{std::move(family), i};
    }

    bool is_family_member() const { return index > 0; }

    std::string display() const {
        if (index > 0) return id + "[" + std::to_string(index) + "]";
        return id;
    }

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// One family's contribution to a vertex set: finitely many members, or all
// but finitely many.
struct FamilyPart {
    bool cofinite = false;
    std::set<long long> indices;  // members when finite, exclusions when cofinite

    friend bool operator==(const FamilyPart&, const FamilyPart&) = default;
};

inline int cmp(const FamilyPart& a, const FamilyPart& b) {
    if (a.cofinite != b.cofinite) return a.cofinite ? 1 : -1;
    if (a.indices < b.indices) return -1;
    if (b.indices < a.indices) return 1;
    return 0;
}

// A set of vertices in descriptor form: finitely many named vertices plus a
// finite-or-cofinite slice of each family. Union, intersection, difference,
// membership and subset tests are exact and closed on this representation.
struct VertexSet {
    std::set<std::string> named;
    std::map<std::string, FamilyPart> families;  // normalized: no empty finite parts

    static VertexSet empty() { return {}; }

    static VertexSet single(const Vertex& v) {
        VertexSet s;
        if (v.is_family_member())
            s.families[v.id] = FamilyPart{false, {v.index}};
        else
            s.named.insert(v.id);
        return s;
    }

    static VertexSet whole_family(const std::string& family) {
        VertexSet s;
        s.families[family] = FamilyPart{true, {}};
        return s;
    }

    bool is_empty() const { return named.empty() && families.empty(); }

    bool contains(const Vertex& v) const {
        if (!v.is_family_member()) return named.count(v.id) > 0;
        auto it = families.find(v.id);
        if (it == families.end()) return false;
        const FamilyPart& part = it->second;
        return part.cofinite ? part.indices.count(v.index) == 0
                             : part.indices.count(v.index) > 0;
    }

    void normalize() {
        for (auto it = families.begin(); it != families.end();) {
            if (!it->second.cofinite && it->second.indices.empty())
                it = families.erase(it);
            else
                ++it;
        }
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

inline int cmp(const VertexSet& a, const VertexSet& b) {
    if (a.named < b.named) return -1;
    if (b.named < a.named) return 1;
    auto ia = a.families.begin(), ib = b.families.begin();
    for (; ia != a.families.end() && ib != b.families.end(); ++ia, ++ib) {
        if (ia->first < ib->first) return -1;
        if (ib->first < ia->first) return 1;
        if (int c = cmp(ia->second, ib->second); c != 0) return c;
    }
    if (ia != a.families.end()) return 1;
    if (ib != b.families.end()) return -1;
    return 0;
}

inline bool vertex_set_less(const VertexSet& a, const VertexSet& b) { return cmp(a, b) < 0; }

namespace detail {

inline std::set<long long> set_union_ll(const std::set<long long>& a, const std::set<long long>& b) {
    std::set<long long> r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline std::set<long long> set_intersect_ll(const std::set<long long>& a, const std::set<long long>& b) {
    std::set<long long> r;
    for (long long x : a)
        if (b.count(x)) r.insert(x);
    return r;
}

inline std::set<long long> set_minus_ll(const std::set<long long>& a, const std::set<long long>& b) {
    std::set<long long> r;
    for (long long x : a)
        if (!b.count(x)) r.insert(x);
    return r;
}

}  // namespace detail

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet r = a;
    r.named.insert(b.named.begin(), b.named.end());
    for (const auto& [fam, part] : b.families) {
        auto it = r.families.find(fam);
        if (it == r.families.end()) {
            r.families[fam] = part;
            continue;
        }
        FamilyPart& mine = it->second;
        if (mine.cofinite && part.cofinite)
            mine.indices = detail::set_intersect_ll(mine.indices, part.indices);
        else if (mine.cofinite)
            mine.indices = detail::set_minus_ll(mine.indices, part.indices);
        else if (part.cofinite)
            mine = FamilyPart{true, detail::set_minus_ll(part.indices, mine.indices)};
        else
            mine.indices = detail::set_union_ll(mine.indices, part.indices);
    }
    r.normalize();
    return r;
}

inline VertexSet set_intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet r;
    for (const auto& v : a.named)
        if (b.named.count(v)) r.named.insert(v);
    for (const auto& [fam, pa] : a.families) {
        auto it = b.families.find(fam);
        if (it == b.families.end()) continue;
        const FamilyPart& pb = it->second;
        if (pa.cofinite && pb.cofinite)
            r.families[fam] = FamilyPart{true, detail::set_union_ll(pa.indices, pb.indices)};
        else if (pa.cofinite)
            r.families[fam] = FamilyPart{false, detail::set_minus_ll(pb.indices, pa.indices)};
        else if (pb.cofinite)
            r.families[fam] = FamilyPart{false, detail::set_minus_ll(pa.indices, pb.indices)};
        else
            r.families[fam] = FamilyPart{false, detail::set_intersect_ll(pa.indices, pb.indices)};
    }
    r.normalize();
    return r;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet r;
    for (const auto& v : a.named)
        if (!b.named.count(v)) r.named.insert(v);
    for (const auto& [fam, pa] : a.families) {
        auto it = b.families.find(fam);
        if (it == b.families.end()) {
            r.families[fam] = pa;
            continue;
        }
        const FamilyPart& pb = it->second;
        if (pa.cofinite && pb.cofinite)
            r.families[fam] = FamilyPart{false, detail::set_minus_ll(pb.indices, pa.indices)};
        else if (pa.cofinite)
            r.families[fam] = FamilyPart{true, detail::set_union_ll(pa.indices, pb.indices)};
        else if (pb.cofinite)
            r.families[fam] = FamilyPart{false, detail::set_intersect_ll(pa.indices, pb.indices)};
        else
            r.families[fam] = FamilyPart{false, detail::set_minus_ll(pa.indices, pb.indices)};
    }
    r.normalize();
    return r;
}

inline VertexSet remove_vertex(const VertexSet& a, const Vertex& v) {
    return set_difference(a, VertexSet::single(v));
}

inline bool subset_of(const VertexSet& a, const VertexSet& b) { return set_intersect(a, b) == a; }

inline std::string display(const VertexSet& s) {
    std::string out = "{";
    bool first = true;
    auto sep = [&] {
        if (!first) out += ", ";
        first = false;
    };
    for (const auto& v : s.named) {
        sep();
        out += v;
    }
    for (const auto& [fam, part] : s.families) {
        if (part.cofinite) {
            sep();
            out += fam + "[*";
            if (!part.indices.empty()) {
                out += " except ";
                bool f2 = true;
                for (long long i : part.indices) {
                    if (!f2) out += ",";
                    f2 = false;
                    out += std::to_string(i);
                }
            }
            out += "]";
        } else {
            for (long long i : part.indices) {
                sep();
                out += fam + "[" + std::to_string(i) + "]";
            }
        }
    }
    out += "}";
    return out;
}

}  // namespace ulpa
