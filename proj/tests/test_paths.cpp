#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <ulpa/paths.hpp>

#include "fixture_util.hpp"

using namespace ulpa;
using ulpa::testing::load_fixture;

namespace {

std::vector<EdgeId> ids(const Ultragraph& g, const std::vector<std::string>& names) {
    std::vector<EdgeId> out;
    for (const auto& n : names) out.push_back(g.edge_id(n));
    return out;
}

std::string literal_list(const Ultragraph& g, const std::vector<SinkPath>& paths) {
    std::string out;
    for (const auto& p : paths) out += path_literal(g, BasisPath{p}) + ";";
    return out;
}

std::string literal_list(const Ultragraph& g, const std::vector<LassoPath>& paths) {
    std::string out;
    for (const auto& p : paths) out += path_literal(g, BasisPath{p}) + ";";
    return out;
}

// All composable (stem, cycle) raw pairs within bounds, for sampling.
std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> raw_lasso_pool(
    const Ultragraph& g, int stem_bound, int cycle_bound) {
    std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> pool;
    auto paths = ulpa::detail::all_paths(g, stem_bound);
    std::vector<std::vector<EdgeId>> cycles;
    for (const auto& p : ulpa::detail::all_paths(g, cycle_bound))
        if (path_range(g, p).named.count(g.edge(p.front()).source)) cycles.push_back(p);
    for (const auto& c : cycles) {
        pool.push_back({{}, c});
        for (const auto& s : paths)
            if (path_range(g, s).named.count(g.edge(c.front()).source)) pool.push_back({s, c});
    }
    return pool;
}

}  // namespace

TEST_CASE("composability check on fixtures") {
    Ultragraph a = load_fixture("FIX-A.json");
    CHECK(is_path(a, std::vector<std::string>{"e1", "e2"}));
    CHECK_FALSE(is_path(a, std::vector<std::string>{"e2", "e1"}));
    Ultragraph d = load_fixture("FIX-D.json");
    CHECK_FALSE(is_path(d, std::vector<std::string>{"e", "e"}));
    CHECK_THROWS_AS(static_cast<void>(is_path(d, std::vector<std::string>{"nope"})), Error);
}

TEST_CASE("lasso canonical form absorbs stems and reduces powers") {
    Ultragraph a = load_fixture("FIX-A.json");
    LassoPath l = canonical_lasso(a, ids(a, {"e1", "e2"}), ids(a, {"e2"}));
    CHECK(l.stem == ids(a, {"e1"}));
    CHECK(l.cycle == ids(a, {"e2"}));

    Ultragraph c = load_fixture("FIX-C.json");
    LassoPath p = canonical_lasso(c, {}, ids(c, {"a", "a"}));
    CHECK(p.stem.empty());
    CHECK(p.cycle == ids(c, {"a"}));

    CHECK_THROWS_AS(static_cast<void>(canonical_lasso(c, ids(c, {"b"}), ids(c, {"a"}))), Error);
    CHECK_THROWS_AS(static_cast<void>(canonical_lasso(c, {}, ids(c, {"b"}))), Error);
}

TEST_CASE("canonicalization is idempotent and denotation-sound") {
    std::mt19937 rng(99);
    for (const auto& name : {"FIX-A.json", "FIX-B.json", "FIX-C.json", "FIX-G-base.json"}) {
        Ultragraph g = load_fixture(name);
        auto pool = raw_lasso_pool(g, 3, 3);
        REQUIRE_FALSE(pool.empty());
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int iter = 0; iter < 500; ++iter) {
            const auto& [stem, cycle] = pool[pick(rng)];
            LassoPath l = canonical_lasso(g, stem, cycle);
            CHECK(canonical_lasso(g, l.stem, l.cycle) == l);
            size_t n = stem.size() + 4 * cycle.size();
            LassoPath raw{stem, cycle};
            CHECK(unroll(raw, n) == unroll(l, n));
        }
    }
}

TEST_CASE("canonical lassos with equal unrollings are equal") {
    Ultragraph g = load_fixture("FIX-C.json");
    auto pool = raw_lasso_pool(g, 3, 3);
    std::vector<LassoPath> canon;
    for (const auto& [stem, cycle] : pool) canon.push_back(canonical_lasso(g, stem, cycle));
    for (const auto& x : canon)
        for (const auto& y : canon) {
            size_t n = x.stem.size() + y.stem.size() + x.cycle.size() * y.cycle.size();
            bool same_word = unroll(x, n) == unroll(y, n);
            CHECK(same_word == (x == y));
        }
}

TEST_CASE("sink path enumeration matches the fixtures") {
    Ultragraph a = load_fixture("FIX-A.json");
    auto pa = enumerate_pstar(a, 2, 2);
    CHECK(literal_list(a, pa) == "(w[1], w[1]);(w[2], w[2]);(e1, w[1]);(e1, w[2]);");

    Ultragraph c = load_fixture("FIX-C.json");
    auto pc = enumerate_pstar(c, 3, 0);
    CHECK(literal_list(c, pc) == "(w, w);(b, w);(a.b, w);(a.a.b, w);");

    Ultragraph loop = load_fixture("FIX-G-base.json");
    CHECK(enumerate_pstar(loop, 5, 5).empty());
}

TEST_CASE("lasso enumeration matches the fixtures") {
    Ultragraph a = load_fixture("FIX-A.json");
    CHECK(literal_list(a, enumerate_lassos(a, 1, 1)) == "(e2)^w;e1.(e2)^w;");

    Ultragraph c = load_fixture("FIX-C.json");
    CHECK(literal_list(c, enumerate_lassos(c, 0, 2)) == "(a)^w;");

    Ultragraph e = load_fixture("FIX-E.json");
    CHECK(enumerate_lassos(e, 3, 3).empty());
}

TEST_CASE("tail classes collapse rotations and sink stems") {
    Ultragraph a = load_fixture("FIX-A.json");
    BasisPath x = SinkPath{ids(a, {"e1"}), sink_key(a, Vertex::family_member("w", 2))};
    EquivClass cx = tail_class(a, x);
    CHECK(class_literal(a, cx) == "SinkClass(w[2])");

    BasisPath l1 = canonical_lasso(a, ids(a, {"e1"}), ids(a, {"e2"}));
    BasisPath l2 = canonical_lasso(a, {}, ids(a, {"e2"}));
    CHECK(tail_class(a, l1) == tail_class(a, l2));
    CHECK(class_literal(a, tail_class(a, l1)) == "TailClass([e2])");

    Ultragraph c = load_fixture("FIX-C.json");
    BasisPath stemless = canonical_lasso(c, {}, ids(c, {"a"}));
    CHECK(class_literal(c, tail_class(c, stemless)) == "TailClass([a])");
}

TEST_CASE("class membership lists and finiteness verdicts") {
    Ultragraph d = load_fixture("FIX-D.json");
    ClassMembers md = class_members(d, SinkClassTag{sink_key(d, Vertex::named("w"))}, 3);
    CHECK(md.finite);
    CHECK(md.size == 2);
    REQUIRE(md.members.size() == 2);
    CHECK(path_literal(d, md.members[0]) == "(w, w)");
    CHECK(path_literal(d, md.members[1]) == "(e, w)");

    Ultragraph c = load_fixture("FIX-C.json");
    ClassMembers mc = class_members(c, SinkClassTag{sink_key(c, Vertex::named("w"))}, 3);
    CHECK_FALSE(mc.finite);
    CHECK(mc.members.size() == 4);  // (w,w), (b,w), (ab,w), (aab,w)

    Ultragraph a = load_fixture("FIX-A.json");
    EquivClass tc = TailClassTag{ids(a, {"e2"})};
    ClassMembers ma = class_members(a, tc, 1);
    CHECK(ma.finite);
    CHECK(ma.size == 2);
    CHECK(literal_list(a, std::vector<LassoPath>{std::get<LassoPath>(ma.members[0]),
                                                 std::get<LassoPath>(ma.members[1])}) ==
          "(e2)^w;e1.(e2)^w;");
}

TEST_CASE("tail_class is constant on members and classes have disjoint members") {
    for (const auto& name : {"FIX-A.json", "FIX-C.json"}) {
        Ultragraph g = load_fixture(name);
        std::set<EquivClass, EquivClassLess> classes;
        for (const auto& p : enumerate_pstar(g, 3, 2)) classes.insert(tail_class(g, BasisPath{p}));
        for (const auto& l : enumerate_lassos(g, 3, 2)) classes.insert(tail_class(g, BasisPath{l}));

        std::map<std::string, int> member_owner;
        int class_index = 0;
        for (const auto& c : classes) {
            ClassMembers cm = class_members(g, c, 4);
            for (const auto& m : cm.members) {
                CHECK(tail_class(g, m) == c);
                auto [it, inserted] = member_owner.emplace(path_literal(g, m), class_index);
                CHECK(inserted);  // no member belongs to two classes
                (void)it;
            }
            ++class_index;
        }
    }
}

TEST_CASE("finite verdicts agree with stabilized enumeration") {
    for (const auto& name : {"FIX-A.json", "FIX-B.json", "FIX-C.json", "FIX-D.json", "FIX-E.json"}) {
        Ultragraph g = load_fixture(name);
        std::set<EquivClass, EquivClassLess> classes;
        for (const auto& p : enumerate_pstar(g, 4, 2)) classes.insert(tail_class(g, BasisPath{p}));
        for (const auto& l : enumerate_lassos(g, 4, 2)) classes.insert(tail_class(g, BasisPath{l}));
        for (const auto& c : classes) {
            ClassMembers cm = class_members(g, c, 0);
            long long at8 = static_cast<long long>(class_members(g, c, 8).members.size());
            long long at12 = static_cast<long long>(class_members(g, c, 12).members.size());
            if (cm.finite) {
                CHECK(at8 == cm.size);
                CHECK(at12 == cm.size);
            } else {
                CHECK(at12 > at8);
            }
        }
    }
}

TEST_CASE("two-edge cycles produce rotation classes and pumped sink classes") {
    RawUltragraph raw;
    raw.vertices = {"u", "v", "w"};
    VertexSet rv, ruw;
    rv.named = {"v"};
    ruw.named = {"u", "w"};
    raw.edges = {{"e", "u", rv}, {"f", "v", ruw}};
    Ultragraph g = Ultragraph::validate(raw);

    EquivClass cls = parse_class(g, "TailClass([e.f])");
    ClassMembers cm = class_members(g, cls, 4);
    CHECK(cm.finite);
    CHECK(cm.size == 2);
    REQUIRE(cm.members.size() == 2);
    CHECK(path_literal(g, cm.members[0]) == "(e.f)^w");
    CHECK(path_literal(g, cm.members[1]) == "(f.e)^w");
    // both rotations normalize to the same class tag
    CHECK(tail_class(g, parse_path(g, "(f.e)^w")) == cls);

    // the cycle reaches w, so the sink class pumps forever
    ClassMembers sink = class_members(g, parse_class(g, "SinkClass(w)"), 6);
    CHECK_FALSE(sink.finite);
    CHECK(sink.members.size() > 3);

    // stems ending in a cycle edge absorb; no stem survives canonically
    auto lassos = enumerate_lassos(g, 3, 2);
    CHECK(lassos.size() == 2);
}

TEST_CASE("finiteness verdicts stabilize on random small ultragraphs") {
    std::mt19937 rng(20240815);
    for (int iter = 0; iter < 50; ++iter) {
        RawUltragraph raw;
        int n = 2 + static_cast<int>(rng() % 2);
        for (int i = 0; i < n; ++i) raw.vertices.push_back("v" + std::to_string(i));
        int edges = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < edges; ++i) {
            VertexSet range;
            while (range.is_empty())
                for (int j = 0; j < n; ++j)
                    if (rng() % 2) range.named.insert("v" + std::to_string(j));
            raw.edges.push_back({"e" + std::to_string(i),
                                 "v" + std::to_string(rng() % n), range});
        }
        Ultragraph g = Ultragraph::validate(raw);
        std::set<EquivClass, EquivClassLess> classes;
        for (const auto& p : enumerate_pstar(g, 3, 1)) classes.insert(tail_class(g, BasisPath{p}));
        for (const auto& l : enumerate_lassos(g, 3, 3)) classes.insert(tail_class(g, BasisPath{l}));
        for (const auto& c : classes) {
            ClassMembers verdict = class_members(g, c, 0);
            size_t at6 = class_members(g, c, 6).members.size();
            size_t at9 = class_members(g, c, 9).members.size();
            CAPTURE(iter);
            CAPTURE(class_literal(g, c));
            if (verdict.finite) {
                CHECK(static_cast<long long>(at6) == verdict.size);
                CHECK(static_cast<long long>(at9) == verdict.size);
            } else {
                CHECK(at9 > at6);
            }
        }
    }
}

TEST_CASE("path literals round-trip") {
    Ultragraph a = load_fixture("FIX-A.json");
    for (const auto& text : {"(e1, w[3])", "(w[1], w[1])", "e1.(e2)^w", "(e2)^w"}) {
        BasisPath p = parse_path(a, text);
        CHECK(path_literal(a, p) == text);
    }
    Ultragraph d = load_fixture("FIX-D.json");
    CHECK(path_literal(d, parse_path(d, "(e, w)")) == "(e, w)");
    CHECK(path_literal(d, parse_path(d, "(w, w)")) == "(w, w)");
    CHECK_THROWS_AS(static_cast<void>(parse_path(d, "(e, u)")), Error);

    CHECK(class_literal(a, parse_class(a, "TailClass([e2])")) == "TailClass([e2])");
    CHECK(class_literal(a, parse_class(a, "SinkClass(w[2])")) == "SinkClass(w[2])");
    CHECK(class_literal(a, parse_class(a, "e1.(e2)^w")) == "TailClass([e2])");
}

TEST_CASE("strip and prepend agree with the word picture") {
    Ultragraph a = load_fixture("FIX-A.json");
    BasisPath l = canonical_lasso(a, {}, ids(a, {"e2"}));
    auto prepended = prepend(a, a.edge_id("e1"), l);
    REQUIRE(prepended.has_value());
    CHECK(path_literal(a, *prepended) == "e1.(e2)^w");
    CHECK(strip_first(a, *prepended) == l);
    // prepending the cycle edge is absorbed
    auto same = prepend(a, a.edge_id("e2"), l);
    REQUIRE(same.has_value());
    CHECK(*same == l);
    // e1 cannot precede a path sourced at u
    CHECK_FALSE(prepend(a, a.edge_id("e1"), *prepended).has_value());
}
