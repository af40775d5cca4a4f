#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include <ulpa/branching.hpp>
#include <ulpa/json_io.hpp>

#include "fixture_util.hpp"

using namespace ulpa;
using ulpa::testing::fixture_path;
using ulpa::testing::load_fixture;

namespace {

const Ring Q = Ring::rationals();

BranchingSystem fix_f() { return load_branching_system(fixture_path("FIX-F.json")); }
BranchingSystem fix_g() { return load_branching_system(fixture_path("FIX-G.json")); }

RawBranching raw_of(const BranchingSystem& b) {
    RawBranching raw{b.n, b.D, {}, {}};
    for (const auto& [e, pts] : b.R) raw.R[b.g.edge(e).name] = pts;
    for (const auto& [e, pairs] : b.f) {
        auto& list = raw.f[b.g.edge(e).name];
        for (const auto& [from, to] : pairs) list.emplace_back(from, to);
    }
    return raw;
}

// Random valid systems: disjoint unions of canonical class systems with the
// points shuffled, sometimes with isolated extra points (valid, not perfect).
BranchingSystem random_valid_system(const Ultragraph& g, const std::vector<EquivClass>& classes,
                                    std::mt19937& rng, int max_points, bool allow_isolated) {
    BranchingSystem acc = canonical_bs(g, classes[rng() % classes.size()]);
    while (acc.n < max_points && rng() % 2 == 0) {
        BranchingSystem more = canonical_bs(g, classes[rng() % classes.size()]);
        if (acc.n + more.n > max_points) break;
        acc = disjoint_union(acc, more);
    }
    int extra = allow_isolated && rng() % 3 == 0 ? 1 : 0;
    // shuffle point labels
    std::vector<int> relabel(acc.n + extra);
    for (int i = 0; i < acc.n + extra; ++i) relabel[i] = i;
    std::shuffle(relabel.begin(), relabel.end(), rng);
    BranchingSystem out{g, acc.n + extra, {}, {}, {}};
    for (const auto& [v, pts] : acc.D)
        for (int p : pts) out.D[v].insert(relabel[p]);
    for (const auto& [e, pts] : acc.R) {
        out.R.try_emplace(e);
        for (int p : pts) out.R[e].insert(relabel[p]);
    }
    for (const auto& [e, pairs] : acc.f) {
        out.f.try_emplace(e);
        for (const auto& [from, to] : pairs) out.f[e][relabel[from]] = relabel[to];
    }
    return out;
}

std::vector<EquivClass> finite_classes(const Ultragraph& g) {
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& p : enumerate_pstar(g, 3, 2)) classes.insert(tail_class(g, BasisPath{p}));
    for (const auto& l : enumerate_lassos(g, 3, 2)) classes.insert(tail_class(g, BasisPath{l}));
    std::vector<EquivClass> out;
    for (const auto& c : classes)
        if (class_members(g, c, 0).finite) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("fixture branching systems validate") {
    BranchingSystem f = fix_f();
    CHECK(f.n == 2);
    CHECK(f.D.at(Vertex::named("w")) == std::set<int>{0});
    CHECK(f.R.at(f.g.edge_id("e")) == std::set<int>{1});
    BranchingSystem g = fix_g();
    CHECK(g.n == 1);
}

TEST_CASE("axiom violations are reported by number and offender") {
    BranchingSystem f = fix_f();
    RawBranching raw = raw_of(f);
    raw.R["e"] = {0, 1};  // R_e escapes D_u and breaks the partition
    auto violations = branching_violations(f.g, raw);
    REQUIRE_FALSE(violations.empty());
    bool mentions_3_or_4 = false;
    for (const auto& v : violations)
        if (v.find("axiom (3)") != std::string::npos || v.find("axiom (4)") != std::string::npos)
            mentions_3_or_4 = true;
    CHECK(mentions_3_or_4);
    CHECK_THROWS_WITH_AS(static_cast<void>(validate_bs(f.g, raw)), doctest::Contains("axiom"),
                         Error);

    // two edges sharing a range point
    RawUltragraph g2;
    g2.vertices = {"u", "w"};
    VertexSet rw;
    rw.named = {"w"};
    VertexSet ru;
    ru.named = {"u"};
    g2.edges = {{"a", "u", ru}, {"b", "u", rw}};
    Ultragraph two = Ultragraph::validate(g2);
    RawBranching bad;
    bad.n = 2;
    bad.D[Vertex::named("u")] = {0};
    bad.D[Vertex::named("w")] = {1};
    bad.R["a"] = {0};
    bad.R["b"] = {0};
    bad.f["a"] = {{0, 0}};
    bad.f["b"] = {{1, 0}};
    auto v2 = branching_violations(two, bad);
    bool mentions_1 = false;
    for (const auto& v : v2) mentions_1 |= v.find("axiom (1)") != std::string::npos;
    CHECK(mentions_1);
}

TEST_CASE("perfectness detects isolated points") {
    CHECK(is_perfect_bs(fix_f()));
    CHECK(is_perfect_bs(fix_g()));

    BranchingSystem f = fix_f();
    RawBranching raw = raw_of(f);
    raw.n = 3;  // extra point 2 in no D_v
    BranchingSystem with_extra = validate_bs(f.g, raw);
    CHECK_FALSE(is_perfect_bs(with_extra));
}

TEST_CASE("the canonical system of a class reproduces the fixtures") {
    Ultragraph d = load_fixture("FIX-D.json");
    BranchingSystem canon = canonical_bs(d, parse_class(d, "SinkClass(w)"));
    CHECK(bs_equal_normalized(canon, fix_f()));
    CHECK(is_perfect_bs(canon));

    Ultragraph gbase = load_fixture("FIX-G-base.json");
    BranchingSystem loop = canonical_bs(gbase, parse_class(gbase, "(c)^w"));
    CHECK(bs_equal_normalized(loop, fix_g()));

    Ultragraph a = load_fixture("FIX-A.json");
    BranchingSystem tail = canonical_bs(a, parse_class(a, "TailClass([e2])"));
    CHECK(tail.n == 2);
    // members in order: (e2)^w then e1.(e2)^w
    CHECK(tail.D.at(Vertex::named("v")) == std::set<int>{0});
    CHECK(tail.D.at(Vertex::named("u")) == std::set<int>{1});
    CHECK(tail.R.at(a.edge_id("e2")) == std::set<int>{0});
    CHECK(tail.R.at(a.edge_id("e1")) == std::set<int>{1});
    CHECK(tail.f.at(a.edge_id("e2")).at(0) == 0);
    CHECK(tail.f.at(a.edge_id("e1")).at(0) == 1);
}

TEST_CASE("induced representations carry the documented matrices") {
    BranchingSystem f = fix_f();
    MatrixRep m = induce_rep(f, Q);
    CHECK(m.dim == 2);
    const Matrix& se = m.s.at(f.g.edge_id("e"));
    CHECK(se.at(1, 0) == Q.one());
    CHECK(se.at(0, 0) == Q.zero());
    CHECK(se.at(0, 1) == Q.zero());
    CHECK(se.at(1, 1) == Q.zero());
    const Matrix& te = m.t.at(f.g.edge_id("e"));
    CHECK(te.at(0, 1) == Q.one());
    CHECK(m.p.at(Vertex::named("u")).at(1, 1) == Q.one());
    CHECK(m.p.at(Vertex::named("u")).at(0, 0) == Q.zero());
    CHECK(m.p.at(Vertex::named("w")).at(0, 0) == Q.one());
    CHECK(verify_matrix_rep(m).ok);

    BranchingSystem g = fix_g();
    MatrixRep mg = induce_rep(g, Q);
    CHECK(mg.s.at(g.g.edge_id("c")) == Matrix::identity(Q, 1));
    CHECK(mg.t.at(g.g.edge_id("c")) == Matrix::identity(Q, 1));
    CHECK(mg.p.at(Vertex::named("u")) == Matrix::identity(Q, 1));

    MatrixRep m2 = induce_rep(f, Ring::integers_mod(2));
    CHECK(verify_matrix_rep(m2).ok);
}

TEST_CASE("trajectory map walks to sinks and detects cycles") {
    MorphismMap tf = compute_t(fix_f());
    CHECK(path_literal(tf.source.g, tf.targets.at(1)) == "(e, w)");
    CHECK(path_literal(tf.source.g, tf.targets.at(0)) == "(w, w)");

    MorphismMap tg = compute_t(fix_g());
    CHECK(path_literal(tg.source.g, tg.targets.at(0)) == "(c)^w");

    Ultragraph a = load_fixture("FIX-A.json");
    BranchingSystem tail = canonical_bs(a, parse_class(a, "TailClass([e2])"));
    MorphismMap tt = compute_t(tail);
    CHECK(path_literal(a, tt.targets.at(0)) == "(e2)^w");
    CHECK(path_literal(a, tt.targets.at(1)) == "e1.(e2)^w");

    BranchingSystem f = fix_f();
    RawBranching raw = raw_of(f);
    raw.n = 3;
    CHECK_THROWS_WITH_AS(static_cast<void>(compute_t(validate_bs(f.g, raw))),
                         doctest::Contains("perfect"), Error);
}

TEST_CASE("trajectory maps verify as morphisms, including preimage equalities") {
    CHECK(verify_morphism(compute_t(fix_f())).ok);
    CHECK(verify_morphism(compute_t(fix_g())).ok);

    // swapped targets violate T(R_e) inside L_e
    MorphismMap swapped = compute_t(fix_f());
    std::swap(swapped.targets.at(0), swapped.targets.at(1));
    MorphismCheck check = verify_morphism(swapped);
    CHECK_FALSE(check.ok);
    CHECK(check.first_failure.find("R_e") != std::string::npos);
}

TEST_CASE("image class closure holds for perfect systems") {
    CHECK(image_class_closure(compute_t(fix_f())).closed);
    CHECK(image_class_closure(compute_t(fix_g())).closed);
}

TEST_CASE("irreducibility verdicts for the fixtures and the doubled control") {
    BsIrredVerdict vf = bs_irreducibility(fix_f());
    REQUIRE(vf.isomorphic);
    CHECK(class_literal(fix_f().g, *vf.cls) == "SinkClass(w)");

    BsIrredVerdict vg = bs_irreducibility(fix_g());
    REQUIRE(vg.isomorphic);
    CHECK(class_literal(fix_g().g, *vg.cls) == "TailClass([c])");

    BranchingSystem doubled = disjoint_union(fix_f(), fix_f());
    BsIrredVerdict vd = bs_irreducibility(doubled);
    CHECK_FALSE(vd.isomorphic);
    CHECK(vd.reason.find("not injective") != std::string::npos);
}

TEST_CASE("random valid systems: induced relations, morphism and closure properties") {
    std::mt19937 rng(31415);
    int built = 0;
    for (const auto& name : {"FIX-A.json", "FIX-D.json", "FIX-E.json", "FIX-G-base.json"}) {
        Ultragraph g = load_fixture(name);
        auto classes = finite_classes(g);
        REQUIRE_FALSE(classes.empty());
        while (built % 4 != 3 || built < 100) {
            BranchingSystem b = random_valid_system(g, classes, rng, 6, true);
            REQUIRE(branching_violations(g, raw_of(b)).empty());
            MatrixRep m = induce_rep(b, Q);
            CHECK(verify_matrix_rep(m).ok);
            if (is_perfect_bs(b)) {
                MorphismMap t = compute_t(b);
                CHECK(verify_morphism(t).ok);
                CHECK(image_class_closure(t).closed);
            }
            ++built;
            if (built % 30 == 0) break;
        }
    }
    CHECK(built >= 100);
}

TEST_CASE("canonical systems are the irreducible models of their classes") {
    for (const auto& name : {"FIX-A.json", "FIX-D.json", "FIX-E.json", "FIX-G-base.json"}) {
        Ultragraph g = load_fixture(name);
        for (const auto& c : finite_classes(g)) {
            BranchingSystem b = canonical_bs(g, c);
            CHECK(is_perfect_bs(b));
            BsIrredVerdict v = bs_irreducibility(b);
            CHECK(v.isomorphic);
            CHECK(*v.cls == c);
        }
    }
}

TEST_CASE("induced representation is conjugate to the class restriction via the trajectory map") {
    Ultragraph d = load_fixture("FIX-D.json");
    BranchingSystem f = fix_f();
    MatrixRep induced = induce_rep(f, Q);
    ClassRep restricted = restrict_class(d, parse_class(d, "SinkClass(w)"), Q);
    MorphismMap t = compute_t(f);

    // permutation matrix sending point x to the basis position of T(x)
    std::map<BasisPath, int, BasisPathLess> pos;
    for (size_t i = 0; i < restricted.basis.size(); ++i)
        pos[restricted.basis[i]] = static_cast<int>(i);
    Matrix perm(Q, f.n, f.n);
    for (const auto& [x, p] : t.targets) perm.at(pos.at(p), x) = Q.one();
    Matrix perm_inv(Q, f.n, f.n);
    for (const auto& [x, p] : t.targets) perm_inv.at(x, pos.at(p)) = Q.one();

    auto conjugated = [&](const Matrix& m) { return perm * m * perm_inv; };
    for (const auto& [key, mat] : generator_matrices(induced)) {
        auto it = restricted.mats.find(key);
        if (it == restricted.mats.end()) continue;
        CHECK(conjugated(mat) == it->second);
    }
}

TEST_CASE("family sink classes run the whole branching pipeline") {
    Ultragraph a = load_fixture("FIX-A.json");
    EquivClass cls = parse_class(a, "SinkClass(w[1])");
    BranchingSystem b = canonical_bs(a, cls);
    CHECK(b.n == 2);
    CHECK(b.D.at(Vertex::family_member("w", 1)) == std::set<int>{0});
    CHECK(b.D.at(Vertex::named("u")) == std::set<int>{1});
    CHECK(is_perfect_bs(b));

    MatrixRep m = induce_rep(b, Q);
    CHECK(verify_matrix_rep(m).ok);
    CHECK(m.p.count(Vertex::family_member("w", 1)) == 1);

    MorphismMap t = compute_t(b);
    CHECK(verify_morphism(t).ok);
    CHECK(path_literal(a, t.targets.at(1)) == "(e1, w[1])");
    CHECK(image_class_closure(t).closed);

    BsIrredVerdict v = bs_irreducibility(b);
    REQUIRE(v.isomorphic);
    CHECK(class_literal(a, *v.cls) == "SinkClass(w[1])");

    // family-member keys survive the json round trip
    json j = branching_to_json(b, "FIX-A.json");
    CHECK(j.at("D").contains("w[1]"));
    std::string path = "/tmp/ulpa_family_bs.json";
    {
        std::ofstream out(path);
        json withref = j;
        withref["ultragraph"] = fixture_path("FIX-A.json");
        out << withref.dump(2);
    }
    BranchingSystem reloaded = load_branching_system(path);
    CHECK(bs_equal_normalized(reloaded, b));
}

TEST_CASE("two-edge cycle classes walk multi-step trajectories") {
    RawUltragraph raw;
    raw.vertices = {"u", "v", "w"};
    VertexSet rv, ruw;
    rv.named = {"v"};
    ruw.named = {"u", "w"};
    raw.edges = {{"e", "u", rv}, {"f", "v", ruw}};
    Ultragraph g = Ultragraph::validate(raw);

    EquivClass cls = parse_class(g, "TailClass([e.f])");
    BranchingSystem b = canonical_bs(g, cls);
    CHECK(b.n == 2);
    CHECK(is_perfect_bs(b));
    MorphismMap t = compute_t(b);
    CHECK(verify_morphism(t).ok);
    CHECK(path_literal(g, t.targets.at(0)) == "(e.f)^w");
    CHECK(path_literal(g, t.targets.at(1)) == "(f.e)^w");
    BsIrredVerdict v = bs_irreducibility(b);
    REQUIRE(v.isomorphic);
    CHECK(*v.cls == cls);
    CHECK(verify_matrix_rep(induce_rep(b, Q)).ok);
}

TEST_CASE("branching system files round-trip through json") {
    BranchingSystem f = fix_f();
    json j = branching_to_json(f, "FIX-D.json");
    CHECK(j.at("n") == 2);
    CHECK(j.at("D").at("w") == json::array({0}));
    CHECK(j.at("f").at("e") == json::array({json::array({0, 1})}));
}
