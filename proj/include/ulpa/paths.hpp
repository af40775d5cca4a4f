#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <ulpa/ultragraph.hpp>

namespace ulpa {

// Orders sinks by declaration: named vertices first, then family members by
// (family, index).
struct SinkKey {
    int group = 0;
    long long index = 0;

    friend bool operator==(const SinkKey&, const SinkKey&) = default;
    friend auto operator<=>(const SinkKey&, const SinkKey&) = default;
};

inline SinkKey sink_key(const Ultragraph& g, const Vertex& v) {
    g.check_vertex(v);
    if (!g.is_sink(v)) throw Error(v.display() + " is not a sink");
    if (v.is_family_member())
        return SinkKey{static_cast<int>(g.vertex_names().size()) + g.family_pos(v.id), v.index};
    return SinkKey{g.vertex_pos(v.id), 0};
}

inline Vertex vertex_of(const Ultragraph& g, const SinkKey& k) {
    int nv = static_cast<int>(g.vertex_names().size());
    if (k.group < nv) return Vertex::named(g.vertex_names()[k.group]);
    return Vertex::family_member(g.family_names()[k.group - nv], k.index);
}

// A finite path into a sink: (stem, v) with v in r(stem), or the degenerate
// pair (v, v) with empty stem.
struct SinkPath {
    std::vector<EdgeId> stem;
    SinkKey sink;

    friend bool operator==(const SinkPath&, const SinkPath&) = default;
};

inline bool operator<(const SinkPath& a, const SinkPath& b) {
    if (a.stem.size() != b.stem.size()) return a.stem.size() < b.stem.size();
    if (a.stem != b.stem) return a.stem < b.stem;
    return a.sink < b.sink;
}

// An eventually periodic infinite path stem.cycle^inf in canonical form: the
// cycle is primitive and the stem cannot be shortened by absorbing its last
// edge into a rotation of the cycle.
struct LassoPath {
    std::vector<EdgeId> stem;
    std::vector<EdgeId> cycle;

    friend bool operator==(const LassoPath&, const LassoPath&) = default;
};

inline bool operator<(const LassoPath& a, const LassoPath& b) {
    if (a.stem.size() != b.stem.size()) return a.stem.size() < b.stem.size();
    if (a.stem != b.stem) return a.stem < b.stem;
    if (a.cycle.size() != b.cycle.size()) return a.cycle.size() < b.cycle.size();
    return a.cycle < b.cycle;
}

using BasisPath = std::variant<SinkPath, LassoPath>;

struct BasisPathLess {
    bool operator()(const BasisPath& a, const BasisPath& b) const {
        if (a.index() != b.index()) return a.index() < b.index();
        if (a.index() == 0) return std::get<SinkPath>(a) < std::get<SinkPath>(b);
        return std::get<LassoPath>(a) < std::get<LassoPath>(b);
    }
};

inline bool composable(const Ultragraph& g, EdgeId e, EdgeId f) {
    return g.edge(e).range.named.count(g.edge(f).source) > 0;
}

inline bool is_path(const Ultragraph& g, const std::vector<EdgeId>& edges) {
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        if (!composable(g, edges[i], edges[i + 1])) return false;
    return true;
}

inline bool is_path(const Ultragraph& g, const std::vector<std::string>& names) {
    std::vector<EdgeId> edges;
    edges.reserve(names.size());
    for (const auto& n : names) edges.push_back(g.edge_id(n));
    return is_path(g, edges);
}

inline Vertex path_source(const Ultragraph& g, const std::vector<EdgeId>& edges) {
    return Vertex::named(g.edge(edges.front()).source);
}

inline const VertexSet& path_range(const Ultragraph& g, const std::vector<EdgeId>& edges) {
    return g.edge(edges.back()).range;
}

namespace detail {

inline std::vector<EdgeId> rotate_left(std::vector<EdgeId> w, size_t k) {
    k %= w.size();
    std::rotate(w.begin(), w.begin() + static_cast<long>(k), w.end());
    return w;
}

inline std::vector<EdgeId> primitive_root(const std::vector<EdgeId>& w) {
    size_t n = w.size();
    for (size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return std::vector<EdgeId>(w.begin(), w.begin() + static_cast<long>(d));
    }
    return w;
}

}  // namespace detail

// Canonicalizes (stem, cycle) to the unique pair denoting the same infinite
// edge sequence. Throws on non-composable input or a non-closed cycle.
inline LassoPath canonical_lasso(const Ultragraph& g, std::vector<EdgeId> stem,
                                 std::vector<EdgeId> cycle) {
    if (cycle.empty()) throw Error("lasso cycle must be nonempty");
    if (!is_path(g, cycle)) throw Error("lasso cycle is not a path");
    if (!path_range(g, cycle).named.count(g.edge(cycle.front()).source))
        throw Error("lasso cycle is not closed");
    if (!is_path(g, stem)) throw Error("lasso stem is not a path");
    if (!stem.empty() && !path_range(g, stem).named.count(g.edge(cycle.front()).source))
        throw Error("lasso stem does not compose with its cycle");

    cycle = detail::primitive_root(cycle);
    while (!stem.empty() && stem.back() == cycle.back()) {
        stem.pop_back();
        std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
    }
    return LassoPath{std::move(stem), std::move(cycle)};
}

inline bool is_canonical(const Ultragraph& g, const LassoPath& x) {
    LassoPath c = canonical_lasso(g, x.stem, x.cycle);
    return c == x;
}

// First n edges of the infinite sequence.
inline std::vector<EdgeId> unroll(const LassoPath& x, size_t n) {
    std::vector<EdgeId> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (i < x.stem.size())
            out.push_back(x.stem[i]);
        else
            out.push_back(x.cycle[(i - x.stem.size()) % x.cycle.size()]);
    }
    return out;
}

inline Vertex source_of(const Ultragraph& g, const BasisPath& x) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        if (s->stem.empty()) return vertex_of(g, s->sink);
        return path_source(g, s->stem);
    }
    const auto& l = std::get<LassoPath>(x);
    return path_source(g, l.stem.empty() ? l.cycle : l.stem);
}

inline std::optional<EdgeId> first_edge(const BasisPath& x) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        if (s->stem.empty()) return std::nullopt;
        return s->stem.front();
    }
    const auto& l = std::get<LassoPath>(x);
    return l.stem.empty() ? l.cycle.front() : l.stem.front();
}

// Drops the first edge; requires one to exist.
inline BasisPath strip_first(const Ultragraph& g, const BasisPath& x) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        if (s->stem.empty()) throw Error("degenerate sink path has no first edge");
        return SinkPath{std::vector<EdgeId>(s->stem.begin() + 1, s->stem.end()), s->sink};
    }
    const auto& l = std::get<LassoPath>(x);
    if (!l.stem.empty())
        return LassoPath{std::vector<EdgeId>(l.stem.begin() + 1, l.stem.end()), l.cycle};
    return canonical_lasso(g, {}, detail::rotate_left(l.cycle, 1));
}

// e.x when the source of x lies in r(e).
inline std::optional<BasisPath> prepend(const Ultragraph& g, EdgeId e, const BasisPath& x) {
    if (!g.edge(e).range.contains(source_of(g, x))) return std::nullopt;
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        std::vector<EdgeId> stem{e};
        stem.insert(stem.end(), s->stem.begin(), s->stem.end());
        return BasisPath{SinkPath{std::move(stem), s->sink}};
    }
    const auto& l = std::get<LassoPath>(x);
    std::vector<EdgeId> stem{e};
    stem.insert(stem.end(), l.stem.begin(), l.stem.end());
    return BasisPath{canonical_lasso(g, std::move(stem), l.cycle)};
}

// Drops the first n edges.
inline BasisPath strip_prefix(const Ultragraph& g, const BasisPath& x, size_t n) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        if (n > s->stem.size()) throw Error("prefix longer than sink path");
        return SinkPath{std::vector<EdgeId>(s->stem.begin() + static_cast<long>(n), s->stem.end()),
                        s->sink};
    }
    const auto& l = std::get<LassoPath>(x);
    if (n <= l.stem.size())
        return LassoPath{std::vector<EdgeId>(l.stem.begin() + static_cast<long>(n), l.stem.end()),
                         l.cycle};
    return canonical_lasso(g, {}, detail::rotate_left(l.cycle, n - l.stem.size()));
}

// Whether the word w is a prefix of the (finite or infinite) path x.
inline bool has_prefix(const BasisPath& x, const std::vector<EdgeId>& w) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        if (w.size() > s->stem.size()) return false;
        return std::equal(w.begin(), w.end(), s->stem.begin());
    }
    return unroll(std::get<LassoPath>(x), w.size()) == w;
}

namespace detail {

// All nonempty edge paths of length <= bound, in (length, lexicographic) order.
inline std::vector<std::vector<EdgeId>> all_paths(const Ultragraph& g, int bound) {
    std::vector<std::vector<EdgeId>> out, frontier;
    for (int len = 1; len <= bound; ++len) {
        std::vector<std::vector<EdgeId>> next;
        if (len == 1) {
            for (EdgeId e = 0; e < g.edge_count(); ++e) next.push_back({e});
        } else {
            for (const auto& p : frontier)
                for (EdgeId e = 0; e < g.edge_count(); ++e)
                    if (composable(g, p.back(), e)) {
                        auto q = p;
                        q.push_back(e);
                        next.push_back(std::move(q));
                    }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return out;
}

// Sinks of g with family indices bounded, in declaration order.
inline std::vector<SinkKey> bounded_sinks(const Ultragraph& g, long long family_bound) {
    std::vector<SinkKey> out;
    for (const auto& v : g.vertex_names())
        if (g.out_edges(v).empty()) out.push_back(sink_key(g, Vertex::named(v)));
    for (const auto& f : g.family_names())
        for (long long i = 1; i <= family_bound; ++i)
            out.push_back(sink_key(g, Vertex::family_member(f, i)));
    return out;
}

}  // namespace detail

inline std::vector<SinkPath> enumerate_pstar(const Ultragraph& g, int stem_bound,
                                             long long family_bound) {
    std::vector<SinkPath> out;
    for (const auto& k : detail::bounded_sinks(g, family_bound)) out.push_back(SinkPath{{}, k});
    for (const auto& p : detail::all_paths(g, stem_bound)) {
        const VertexSet& range = path_range(g, p);
        for (const auto& k : detail::bounded_sinks(g, family_bound))
            if (range.contains(vertex_of(g, k))) out.push_back(SinkPath{p, k});
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

// Closed primitive edge words of length <= bound.
inline std::vector<std::vector<EdgeId>> primitive_cycles(const Ultragraph& g, int bound) {
    std::vector<std::vector<EdgeId>> out;
    for (const auto& p : all_paths(g, bound)) {
        if (!path_range(g, p).named.count(g.edge(p.front()).source)) continue;
        if (primitive_root(p).size() != p.size()) continue;
        out.push_back(p);
    }
    return out;
}

}  // namespace detail

inline std::vector<LassoPath> enumerate_lassos(const Ultragraph& g, int stem_bound,
                                               int cycle_bound) {
    std::vector<LassoPath> out;
    auto cycles = detail::primitive_cycles(g, cycle_bound);
    auto stems = detail::all_paths(g, stem_bound);
    for (const auto& cycle : cycles) {
        out.push_back(LassoPath{{}, cycle});
        for (const auto& stem : stems) {
            if (stem.back() == cycle.back()) continue;  // not canonical
            if (!path_range(g, stem).named.count(g.edge(cycle.front()).source)) continue;
            out.push_back(LassoPath{stem, cycle});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// A tail-equivalence class: all paths into one sink, or all eventually
// periodic paths sharing a primitive cycle up to rotation.
struct SinkClassTag {
    SinkKey v;
    friend bool operator==(const SinkClassTag&, const SinkClassTag&) = default;
    friend auto operator<=>(const SinkClassTag&, const SinkClassTag&) = default;
};

struct TailClassTag {
    std::vector<EdgeId> cycle;  // lexicographically least rotation
    friend bool operator==(const TailClassTag&, const TailClassTag&) = default;
};

inline bool operator<(const TailClassTag& a, const TailClassTag& b) {
    if (a.cycle.size() != b.cycle.size()) return a.cycle.size() < b.cycle.size();
    return a.cycle < b.cycle;
}

using EquivClass = std::variant<SinkClassTag, TailClassTag>;

struct EquivClassLess {
    bool operator()(const EquivClass& a, const EquivClass& b) const {
        if (a.index() != b.index()) return a.index() < b.index();
        if (a.index() == 0) return std::get<SinkClassTag>(a) < std::get<SinkClassTag>(b);
        return std::get<TailClassTag>(a) < std::get<TailClassTag>(b);
    }
};

inline bool equiv_class_eq(const EquivClass& a, const EquivClass& b) { return a == b; }

inline EquivClass tail_class(const Ultragraph& g, const BasisPath& x) {
    if (const auto* s = std::get_if<SinkPath>(&x)) return SinkClassTag{s->sink};
    const auto& l = std::get<LassoPath>(x);
    std::vector<EdgeId> best = l.cycle;
    for (size_t k = 1; k < l.cycle.size(); ++k)
        best = std::min(best, detail::rotate_left(l.cycle, k));
    (void)g;
    return TailClassTag{best};
}

struct ClassMembers {
    std::vector<BasisPath> members;  // stems bounded by the requested bound
    bool finite = false;
    long long size = 0;  // meaningful when finite
};

namespace detail {

// Reachability over the edge graph: d -> e when a path may continue from d
// into e.
struct EdgeReach {
    std::vector<std::vector<bool>> step, reach;

    explicit EdgeReach(const Ultragraph& g) {
        int n = g.edge_count();
        step.assign(n, std::vector<bool>(n, false));
        for (EdgeId d = 0; d < n; ++d)
            for (EdgeId e = 0; e < n; ++e) step[d][e] = composable(g, d, e);
        reach = step;
        for (EdgeId k = 0; k < n; ++k)
            for (EdgeId i = 0; i < n; ++i)
                for (EdgeId j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    }

    bool on_cycle(EdgeId e) const { return reach[e][e]; }
    bool reaches(EdgeId d, EdgeId e) const { return d == e || reach[d][e]; }
};

// Number of nonempty paths whose last edge lies in `entries`; only valid when
// no entry is reachable from an edge-graph cycle.
inline long long count_paths_into(const Ultragraph& g, const EdgeReach& er,
                                  const std::set<EdgeId>& entries) {
    std::map<EdgeId, long long> memo;
    auto count_ending_at = [&](auto&& self, EdgeId e) -> long long {
        auto it = memo.find(e);
        if (it != memo.end()) return it->second;
        long long total = 1;
        for (EdgeId d = 0; d < g.edge_count(); ++d)
            if (er.step[d][e]) total += self(self, d);
        memo[e] = total;
        return total;
    };
    long long total = 0;
    for (EdgeId e : entries) total += count_ending_at(count_ending_at, e);
    return total;
}

inline bool pumpable(const Ultragraph& g, const EdgeReach& er, const std::set<EdgeId>& entries) {
    for (EdgeId k = 0; k < g.edge_count(); ++k) {
        if (!er.on_cycle(k)) continue;
        for (EdgeId e : entries)
            if (er.reaches(k, e)) return true;
    }
    return false;
}

}  // namespace detail

// Enumerates class members with bounded stems and decides finiteness by
// reachability on the edge graph.
inline ClassMembers class_members(const Ultragraph& g, const EquivClass& c, int stem_bound) {
    detail::EdgeReach er(g);
    ClassMembers out;
    auto stems = detail::all_paths(g, stem_bound);

    if (const auto* sc = std::get_if<SinkClassTag>(&c)) {
        Vertex v = vertex_of(g, sc->v);
        std::set<EdgeId> entries;
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (g.edge(e).range.contains(v)) entries.insert(e);
        out.members.push_back(SinkPath{{}, sc->v});
        for (const auto& p : stems)
            if (entries.count(p.back())) out.members.push_back(SinkPath{p, sc->v});
        out.finite = !detail::pumpable(g, er, entries);
        if (out.finite) out.size = 1 + detail::count_paths_into(g, er, entries);
    } else {
        const auto& cycle = std::get<TailClassTag>(c).cycle;
        out.finite = true;
        out.size = 0;
        for (size_t k = 0; k < cycle.size(); ++k) {
            auto rot = detail::rotate_left(cycle, k);
            std::set<EdgeId> entries;
            for (EdgeId e = 0; e < g.edge_count(); ++e)
                if (e != rot.back() && g.edge(e).range.named.count(g.edge(rot.front()).source))
                    entries.insert(e);
            out.members.push_back(LassoPath{{}, rot});
            for (const auto& p : stems)
                if (entries.count(p.back())) out.members.push_back(LassoPath{p, rot});
            if (detail::pumpable(g, er, entries)) out.finite = false;
            if (out.finite) out.size += 1 + detail::count_paths_into(g, er, entries);
        }
        if (!out.finite) out.size = 0;
    }
    std::sort(out.members.begin(), out.members.end(), BasisPathLess{});
    return out;
}

// Complete member list of a provably finite class; throws on infinite
// classes.
inline std::vector<BasisPath> full_class_members(const Ultragraph& g, const EquivClass& c) {
    ClassMembers cm = class_members(g, c, 0);
    if (!cm.finite) throw Error("infinite class");
    int bound = static_cast<int>(cm.size);
    while (true) {
        ClassMembers full = class_members(g, c, bound);
        if (static_cast<long long>(full.members.size()) == full.size) return full.members;
        bound += g.edge_count() + 1;
    }
}

// --- literals -------------------------------------------------------------

inline std::string edge_word(const Ultragraph& g, const std::vector<EdgeId>& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += g.edge(w[i]).name;
    }
    return out;
}

// "(e1.e2, w[3])", "(w, w)" or "e1.(e2)^w"
inline std::string path_literal(const Ultragraph& g, const BasisPath& x) {
    if (const auto* s = std::get_if<SinkPath>(&x)) {
        std::string v = vertex_of(g, s->sink).display();
        if (s->stem.empty()) return "(" + v + ", " + v + ")";
        return "(" + edge_word(g, s->stem) + ", " + v + ")";
    }
    const auto& l = std::get<LassoPath>(x);
    std::string out;
    if (!l.stem.empty()) out += edge_word(g, l.stem) + ".";
    out += "(" + edge_word(g, l.cycle) + ")^w";
    return out;
}

inline std::string class_literal(const Ultragraph& g, const EquivClass& c) {
    if (const auto* sc = std::get_if<SinkClassTag>(&c))
        return "SinkClass(" + vertex_of(g, sc->v).display() + ")";
    return "TailClass([" + edge_word(g, std::get<TailClassTag>(c).cycle) + "])";
}

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

inline Vertex parse_vertex_literal(const Ultragraph& g, const std::string& text) {
    std::string t = trim(text);
    auto lb = t.find('[');
    if (lb != std::string::npos) {
        if (t.back() != ']') throw Error("bad vertex literal: " + text);
        std::string fam = t.substr(0, lb);
        long long idx = 0;
        try {
            idx = std::stoll(t.substr(lb + 1, t.size() - lb - 2));
        } catch (const std::exception&) {
            throw Error("bad vertex literal: " + text);
        }
        Vertex v = Vertex::family_member(fam, idx);
        g.check_vertex(v);
        return v;
    }
    Vertex v = Vertex::named(t);
    g.check_vertex(v);
    return v;
}

inline std::vector<EdgeId> parse_edge_word(const Ultragraph& g, const std::string& text) {
    std::vector<EdgeId> out;
    std::string t = trim(text);
    if (t.empty()) return out;
    size_t start = 0;
    while (start <= t.size()) {
        size_t dot = t.find('.', start);
        std::string part = trim(dot == std::string::npos ? t.substr(start)
                                                         : t.substr(start, dot - start));
        out.push_back(g.edge_id(part));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return out;
}

}  // namespace detail

// Parses the path literal syntax produced by path_literal.
inline BasisPath parse_path(const Ultragraph& g, const std::string& text) {
    std::string t = detail::trim(text);
    if (t.empty()) throw Error("empty path literal");
    auto caret = t.rfind(")^w");
    if (caret != std::string::npos && caret + 3 == t.size()) {
        auto open = t.rfind('(', caret);
        if (open == std::string::npos) throw Error("bad lasso literal: " + text);
        std::string stem_text = detail::trim(t.substr(0, open));
        if (!stem_text.empty() && stem_text.back() == '.') stem_text.pop_back();
        auto stem = detail::parse_edge_word(g, stem_text);
        auto cycle = detail::parse_edge_word(g, t.substr(open + 1, caret - open - 1));
        return canonical_lasso(g, stem, cycle);
    }
    if (t.front() == '(' && t.back() == ')') {
        std::string inner = t.substr(1, t.size() - 2);
        auto comma = inner.rfind(',');
        if (comma == std::string::npos) throw Error("bad sink path literal: " + text);
        std::string left = detail::trim(inner.substr(0, comma));
        Vertex v = detail::parse_vertex_literal(g, inner.substr(comma + 1));
        SinkKey k = sink_key(g, v);
        if (left == v.display()) return SinkPath{{}, k};
        auto stem = detail::parse_edge_word(g, left);
        if (!is_path(g, stem)) throw Error("stem is not a path: " + left);
        if (stem.empty() || !path_range(g, stem).contains(v))
            throw Error("sink " + v.display() + " is not in the range of " + left);
        return SinkPath{stem, k};
    }
    throw Error("bad path literal: " + text);
}

// Accepts "SinkClass(v)", "TailClass([c])", or any path literal (whose class
// is taken).
inline EquivClass parse_class(const Ultragraph& g, const std::string& text) {
    std::string t = detail::trim(text);
    if (t.rfind("SinkClass(", 0) == 0 && t.back() == ')') {
        Vertex v = detail::parse_vertex_literal(g, t.substr(10, t.size() - 11));
        return SinkClassTag{sink_key(g, v)};
    }
    if (t.rfind("TailClass(", 0) == 0 && t.back() == ')') {
        std::string inner = detail::trim(t.substr(10, t.size() - 11));
        if (!inner.empty() && inner.front() == '[' && inner.back() == ']')
            inner = inner.substr(1, inner.size() - 2);
        auto cycle = detail::parse_edge_word(g, inner);
        auto lasso = canonical_lasso(g, {}, cycle);
        return tail_class(g, BasisPath{lasso});
    }
    return tail_class(g, parse_path(g, t));
}

}  // namespace ulpa
