#pragma once

#include <functional>
#include <random>
#include <sstream>

#include <ulpa/json_io.hpp>
#include <ulpa/permutative.hpp>
#include <ulpa/zero_test.hpp>

namespace ulpa {

// The acceptance suite: discrete reproduction checks and property suites, all
// exact (zero tolerance). Each criterion runs independently and reports one
// pass/fail line.
struct CriterionResult {
    int number = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

namespace acceptance {

inline const Ring Q = Ring::rationals();

struct Context {
    std::string fixtures_dir;
    unsigned seed = 0;

    Ultragraph fixture(const std::string& name) const {
        return load_ultragraph(fixtures_dir + "/" + name);
    }
    BranchingSystem branching(const std::string& name) const {
        return load_branching_system(fixtures_dir + "/" + name);
    }
};

// A check accumulator: first failure wins, successes are counted.
struct Checker {
    long long checks = 0;
    bool ok = true;
    std::string failure;

    void expect(bool condition, const std::string& what) {
        ++checks;
        if (!condition && ok) {
            ok = false;
            failure = what;
        }
    }
};

inline Vector gen_apply(const Ultragraph& g, const Generator& gen, const Vector& v) {
    Vector out(v.ring);
    for (const auto& [x, c] : v.entries) {
        Vector moved = act_generator(g, gen, x, v.ring);
        for (const auto& [y, cy] : moved.entries) out.add(y, v.ring.mul(c, cy));
    }
    return out;
}

inline std::vector<BasisPath> relation_family(const Ultragraph& g, int stem_bound,
                                              long long family_bound) {
    int cycle_bound = static_cast<int>(g.vertex_names().size() +
                                       g.family_names().size() * family_bound);
    std::vector<BasisPath> family;
    for (const auto& p : enumerate_pstar(g, stem_bound, family_bound)) family.emplace_back(p);
    for (const auto& l : enumerate_lassos(g, stem_bound, std::max(1, cycle_bound)))
        family.emplace_back(l);
    return family;
}

inline std::vector<VertexSet> projection_sample(const Ultragraph& g, long long family_bound) {
    std::vector<VertexSet> base;
    for (const auto& v : g.vertex_names()) base.push_back(VertexSet::single(Vertex::named(v)));
    for (const auto& f : g.family_names())
        for (long long i = 1; i <= family_bound; ++i)
            base.push_back(VertexSet::single(Vertex::family_member(f, i)));
    for (EdgeId e = 0; e < g.edge_count(); ++e) base.push_back(g.edge(e).range);
    std::vector<VertexSet> sample = base;
    for (size_t i = 0; i < base.size(); ++i)
        for (size_t j = i + 1; j < base.size(); ++j) {
            sample.push_back(set_union(base[i], base[j]));
            VertexSet meet = set_intersect(base[i], base[j]);
            if (!meet.is_empty()) sample.push_back(meet);
        }
    return sample;
}

inline std::vector<EquivClass> finite_classes(const Ultragraph& g) {
    long long fb = g.default_family_bound();
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& p : enumerate_pstar(g, 3, fb)) classes.insert(tail_class(g, BasisPath{p}));
    for (const auto& l : enumerate_lassos(g, 3, 2)) classes.insert(tail_class(g, BasisPath{l}));
    std::vector<EquivClass> out;
    for (const auto& c : classes)
        if (class_members(g, c, 0).finite) out.push_back(c);
    return out;
}

inline ExprPtr random_ast(const Ultragraph& g, std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> leaf_kind(0, 3);
    std::uniform_int_distribution<int> op_kind(0, 2);
    std::uniform_int_distribution<int> small(1, 4);
    std::uniform_int_distribution<int> edge_pick(0, g.edge_count() - 1);
    auto make = [](auto node) { return std::make_shared<Expr>(Expr{std::move(node)}); };
    if (depth == 0 || rng() % 4 == 0) {
        switch (leaf_kind(rng)) {
            case 0: return make(ExprScalar{Q.make(small(rng) - 2, small(rng))});
            case 1: return make(ExprGenS{g.edge(edge_pick(rng)).name});
            case 2: return make(ExprGenT{g.edge(edge_pick(rng)).name});
            default: {
                int which = static_cast<int>(rng() % 3);
                if (which == 0 || g.family_names().empty()) {
                    size_t i = rng() % g.vertex_names().size();
                    return make(ExprGenP{
                        std::make_shared<SetExpr>(SetExpr{SetAtomVertex{g.vertex_names()[i]}})});
                }
                if (which == 1) {
                    size_t i = rng() % g.family_names().size();
                    return make(ExprGenP{std::make_shared<SetExpr>(SetExpr{SetAtomFamily{
                        g.family_names()[i], 1 + static_cast<long long>(rng() % 3)}})});
                }
                return make(ExprGenP{
                    std::make_shared<SetExpr>(SetExpr{SetAtomRange{g.edge(edge_pick(rng)).name}})});
            }
        }
    }
    char ops[3] = {'+', '-', '*'};
    return make(ExprBinary{ops[op_kind(rng)], random_ast(g, rng, depth - 1),
                           random_ast(g, rng, depth - 1)});
}

// 1. Defining relations hold under the path action on every bounded basis
//    path of FIX-A..FIX-E.
inline CriterionResult criterion_1(const Context& ctx) {
    Checker check;
    for (const auto& name : {"FIX-A.json", "FIX-B.json", "FIX-C.json", "FIX-D.json", "FIX-E.json"}) {
        Ultragraph g = ctx.fixture(name);
        auto family = relation_family(g, 6, 3);
        auto sample = projection_sample(g, 3);
        for (const auto& b : family) {
            Vector unit = unit_vector(Q, b);
            for (const auto& A : sample)
                for (const auto& B : sample) {
                    Vector meet = gen_apply(g, GenP{set_intersect(A, B)}, unit);
                    check.expect(gen_apply(g, GenP{A}, gen_apply(g, GenP{B}, unit)) == meet,
                                 std::string(name) + ": projection product");
                    Vector join = gen_apply(g, GenP{set_union(A, B)}, unit);
                    Vector sum =
                        sub(add(gen_apply(g, GenP{A}, unit), gen_apply(g, GenP{B}, unit)), meet);
                    check.expect(join == sum, std::string(name) + ": projection union");
                }
            for (EdgeId e = 0; e < g.edge_count(); ++e) {
                VertexSet src = VertexSet::single(Vertex::named(g.edge(e).source));
                const VertexSet& rng = g.edge(e).range;
                Vector se = gen_apply(g, GenS{e}, unit);
                Vector te = gen_apply(g, GenSstar{e}, unit);
                check.expect(gen_apply(g, GenP{src}, se) == se, std::string(name) + ": (2) left");
                check.expect(gen_apply(g, GenS{e}, gen_apply(g, GenP{rng}, unit)) == se,
                             std::string(name) + ": (2) right");
                check.expect(gen_apply(g, GenP{rng}, te) == te, std::string(name) + ": (2) star");
                check.expect(gen_apply(g, GenSstar{e}, gen_apply(g, GenP{src}, unit)) == te,
                             std::string(name) + ": (2) star right");
                for (EdgeId f = 0; f < g.edge_count(); ++f) {
                    Vector prod = gen_apply(g, GenSstar{e}, gen_apply(g, GenS{f}, unit));
                    if (e == f)
                        check.expect(prod == gen_apply(g, GenP{rng}, unit),
                                     std::string(name) + ": (3) diagonal");
                    else
                        check.expect(prod.is_zero(), std::string(name) + ": (3) off-diagonal");
                }
            }
            for (const auto& vname : g.vertex_names()) {
                if (g.out_edges(vname).empty()) continue;
                Vector sum(Q);
                for (EdgeId e : g.out_edges(vname))
                    sum = add(sum, gen_apply(g, GenS{e}, gen_apply(g, GenSstar{e}, unit)));
                check.expect(sum == gen_apply(g, GenP{VertexSet::single(Vertex::named(vname))}, unit),
                             std::string(name) + ": (4) at " + vname);
            }
        }
    }
    return {1, "relation suite on FIX-A..FIX-E (stem 6, family 3)", check.ok,
            check.ok ? std::to_string(check.checks) + " exact vector identities"
                     : check.failure};
}

// 2. FIX-A path combinatorics reproduce the two lassos, the four bounded sink
//    paths, and the two-element tail class.
inline CriterionResult criterion_2(const Context& ctx) {
    Checker check;
    Ultragraph a = ctx.fixture("FIX-A.json");
    auto lassos = enumerate_lassos(a, 1, 1);
    check.expect(lassos.size() == 2, "lasso count");
    if (lassos.size() == 2) {
        check.expect(path_literal(a, BasisPath{lassos[0]}) == "(e2)^w", "first lasso");
        check.expect(path_literal(a, BasisPath{lassos[1]}) == "e1.(e2)^w", "second lasso");
    }
    auto pstar = enumerate_pstar(a, 2, 2);
    check.expect(pstar.size() == 4, "sink path count");
    std::set<std::string> got;
    for (const auto& p : pstar) got.insert(path_literal(a, BasisPath{p}));
    check.expect(got == std::set<std::string>{"(w[1], w[1])", "(w[2], w[2])", "(e1, w[1])",
                                              "(e1, w[2])"},
                 "sink path contents");
    ClassMembers cm = class_members(a, parse_class(a, "TailClass([e2])"), 4);
    check.expect(cm.finite && cm.size == 2, "tail class size");
    return {2, "FIX-A reproduction: two lassos, four sink paths, class of size two", check.ok,
            check.ok ? "exact enumerations match" : check.failure};
}

// 3. FIX-B: Condition (L) fails with witness e1 and p_{v0} = s_{e1} under the
//    representation on the full test family.
inline CriterionResult criterion_3(const Context& ctx) {
    Checker check;
    Ultragraph b = ctx.fixture("FIX-B.json");
    ConditionLReport report = condition_l(b);
    check.expect(!report.satisfied, "Condition (L) verdict");
    check.expect(report.witness.size() == 1 && b.edge(report.witness[0]).name == "e1",
                 "witness cycle");
    AlgebraElement lhs = reduce_to_spanning(b, parse_expr("p({v0})", b, Q), Q);
    AlgebraElement rhs = reduce_to_spanning(b, parse_expr("s(e1)", b, Q), Q);
    ZeroVerdict verdict = equal_test(b, lhs, rhs, 6);
    check.expect(verdict.zero, "equal in the representation");
    check.expect(!verdict.condition_l_holds, "regime annotation");
    return {3, "FIX-B: exitless cycle e1 and the collapsing projection identity", check.ok,
            check.ok ? "witness e1; zero on the full test family" : check.failure};
}

// 4. FIX-C faithful regime: seeded random nonzero spanning elements are
//    always detected with a verified witness. The generator only emits
//    elements that are provably nonzero: all words of one fixed length per
//    side, pairwise distinct, so no Cuntz-Krieger collapse can cancel them.
inline CriterionResult criterion_4(const Context& ctx) {
    Checker check;
    Ultragraph c = ctx.fixture("FIX-C.json");
    check.expect(condition_l(c).satisfied, "FIX-C satisfies Condition (L)");
    std::mt19937 rng(ctx.seed + 4);
    std::uniform_int_distribution<int> len(0, 2);
    std::uniform_int_distribution<int> coeff(1, 9);
    std::uniform_int_distribution<int> sign(0, 1);

    std::vector<std::vector<EdgeId>> words_by_len[3];
    words_by_len[0] = {{}};
    for (const auto& p : ulpa::detail::all_paths(c, 2))
        words_by_len[p.size()].push_back(p);

    int successes = 0;
    for (int iter = 0; iter < 100; ++iter) {
        AlgebraElement x(Q);
        while (x.is_zero()) {
            int la = len(rng), lb = len(rng);
            const auto& alphas = words_by_len[la];
            const auto& betas = words_by_len[lb];
            std::set<std::pair<size_t, size_t>> used;
            int terms = 1 + static_cast<int>(rng() % 3);
            for (int t = 0; t < terms; ++t) {
                size_t ia = rng() % alphas.size(), ib = rng() % betas.size();
                if (!used.insert({ia, ib}).second) continue;
                auto m = make_monomial(c, alphas[ia], c.all_vertices(), betas[ib]);
                if (!m) continue;
                x.add_term(*m, Q.from_int(sign(rng) ? coeff(rng) : -coeff(rng)));
            }
        }
        ZeroVerdict verdict = zero_test(c, x, 4);
        if (!verdict.zero && verdict.witness &&
            !act(c, x, unit_vector(Q, *verdict.witness)).is_zero())
            ++successes;
    }
    check.expect(successes == 100, "nonzero detection " + std::to_string(successes) + "/100");
    return {4, "FIX-C faithful regime: 100/100 random nonzero elements detected", check.ok,
            check.ok ? "100/100 verified witnesses" : check.failure};
}

// 5. Endomorphism rings: commutant dimension one for single classes, two for
//    the disjoint-union doubled module.
inline CriterionResult criterion_5(const Context& ctx) {
    Checker check;
    Ultragraph d = ctx.fixture("FIX-D.json");
    check.expect(commutant_dim(restrict_class(d, parse_class(d, "SinkClass(w)"), Q)) == 1,
                 "FIX-D sink class commutant");
    Ultragraph a = ctx.fixture("FIX-A.json");
    check.expect(commutant_dim(restrict_class(a, parse_class(a, "TailClass([e2])"), Q)) == 1,
                 "FIX-A tail class commutant");

    RawUltragraph raw;
    raw.vertices = {"u", "w", "u2", "w2"};
    VertexSet rw, rw2;
    rw.named = {"w"};
    rw2.named = {"w2"};
    raw.edges = {{"e", "u", rw}, {"e2", "u2", rw2}};
    Ultragraph un = Ultragraph::validate(raw);
    ClassRep doubled = direct_sum(restrict_class(un, parse_class(un, "SinkClass(w)"), Q),
                                  restrict_class(un, parse_class(un, "SinkClass(w2)"), Q));
    check.expect(commutant_dim(doubled) == 2, "doubled module control");
    return {5, "endomorphism ring: commutant 1 per class, 2 for the doubled control", check.ok,
            check.ok ? "dimensions 1, 1 and 2 by exact solve" : check.failure};
}

// 6. Non-equivalence: no nonzero intertwiner between the two sink classes of
//    FIX-E.
inline CriterionResult criterion_6(const Context& ctx) {
    Ultragraph e = ctx.fixture("FIX-E.json");
    ClassRep w = restrict_class(e, parse_class(e, "SinkClass(w)"), Q);
    ClassRep z = restrict_class(e, parse_class(e, "SinkClass(z)"), Q);
    long long dim = intertwiner_dim(w, z);
    return {6, "non-equivalence: intertwiner space between FIX-E sink classes is zero", dim == 0,
            dim == 0 ? "dimension 0" : "dimension " + std::to_string(dim)};
}

// 7. Irreducibility certificates on every finite class of FIX-A, FIX-D and
//    FIX-E: transitivity witnesses for every ordered member pair and
//    isolation witnesses on seeded random vectors.
inline CriterionResult criterion_7(const Context& ctx) {
    Checker check;
    std::mt19937 rng(ctx.seed + 7);
    std::uniform_int_distribution<int> coeff(1, 9);
    std::uniform_int_distribution<int> sign(0, 1);
    for (const auto& name : {"FIX-A.json", "FIX-D.json", "FIX-E.json"}) {
        Ultragraph g = ctx.fixture(name);
        auto classes = finite_classes(g);
        check.expect(!classes.empty(), std::string(name) + ": finite classes exist");
        for (const auto& cls : classes) {
            auto members = full_class_members(g, cls);
            for (const auto& x : members)
                for (const auto& z : members) {
                    AlgebraElement mover = transitivity_witness(g, x, z, Q);
                    check.expect(act(g, mover, unit_vector(Q, z)) == unit_vector(Q, x),
                                 std::string(name) + ": transitivity " + path_literal(g, z) +
                                     " -> " + path_literal(g, x));
                }
            for (int iter = 0; iter < 50; ++iter) {
                Vector v(Q);
                while (v.is_zero())
                    for (const auto& m : members)
                        if (rng() % 2 == 0)
                            v.add(m, Q.from_int(sign(rng) ? coeff(rng) : -coeff(rng)));
                IsolationWitness wit = isolate_witness(g, v);
                Vector isolated = act(g, wit.monomial, v);
                bool good = isolated.entries.size() == 1 &&
                            isolated.entries.begin()->first == wit.target &&
                            isolated.entries.begin()->second == wit.coefficient &&
                            !Q.is_zero(wit.coefficient);
                check.expect(good, std::string(name) + ": isolation witness");
            }
        }
    }
    return {7, "irreducibility certificates on all finite classes of FIX-A/D/E", check.ok,
            check.ok ? std::to_string(check.checks) + " verified witnesses" : check.failure};
}

// 8. Branching systems round trip: validation, perfectness, induced
//    relations, morphism checks with preimage equalities, image class
//    closure, and the isomorphism verdicts with the doubled control.
inline CriterionResult criterion_8(const Context& ctx) {
    Checker check;
    for (const auto& name : {"FIX-F.json", "FIX-G.json"}) {
        BranchingSystem b = ctx.branching(name);
        check.expect(is_perfect_bs(b), std::string(name) + ": perfect");
        MatrixRep m = induce_rep(b, Q);
        check.expect(verify_matrix_rep(m).ok, std::string(name) + ": induced relations");
        MorphismMap t = compute_t(b);
        check.expect(verify_morphism(t).ok, std::string(name) + ": morphism with preimages");
        check.expect(image_class_closure(t).closed, std::string(name) + ": class closure");
        BsIrredVerdict v = bs_irreducibility(b);
        check.expect(v.isomorphic, std::string(name) + ": isomorphic to its class");
    }
    BsIrredVerdict vf = bs_irreducibility(ctx.branching("FIX-F.json"));
    check.expect(vf.cls && class_literal(ctx.fixture("FIX-D.json"), *vf.cls) == "SinkClass(w)",
                 "FIX-F class identity");
    BranchingSystem doubled =
        disjoint_union(ctx.branching("FIX-F.json"), ctx.branching("FIX-F.json"));
    BsIrredVerdict vd = bs_irreducibility(doubled);
    check.expect(!vd.isomorphic, "doubled control not isomorphic");
    return {8, "branching round trip on FIX-F/FIX-G with doubled control", check.ok,
            check.ok ? "all verdicts as classified" : check.failure};
}

// 9. Permutative pipeline: the FIX-D class restriction is perfect and
//    permutative, extraction round-trips, the verdict is irreducible; the
//    FIX-E four-dimensional block representation is reducible with a verified
//    invariant subspace despite matching abstract rank.
inline CriterionResult criterion_9(const Context& ctx) {
    Checker check;
    Ultragraph d = ctx.fixture("FIX-D.json");
    EquivClass dw = parse_class(d, "SinkClass(w)");
    MatrixRep m = class_to_matrix_rep(d, restrict_class(d, dw, Q));
    check.expect(is_perfect_rep(m).perfect, "FIX-D class restriction perfect");
    auto basis = heuristic_basis_search(m);
    check.expect(basis.has_value(), "path basis found");
    if (basis) {
        check.expect(is_permutative_with(m, *basis), "permutative with the path basis");
        check.expect(bs_equal_normalized(extract_bs(m, *basis), canonical_bs(d, dw)),
                     "extraction round-trips to the canonical system");
        IrredVerdict v = decide_irreducible(m, *basis);
        check.expect(v.irreducible && v.cls && class_literal(d, *v.cls) == "SinkClass(w)",
                     "irreducible verdict");
    }

    Ultragraph e = ctx.fixture("FIX-E.json");
    ClassRep w = restrict_class(e, parse_class(e, "SinkClass(w)"), Q);
    ClassRep z = restrict_class(e, parse_class(e, "SinkClass(z)"), Q);
    MatrixRep block = class_to_matrix_rep(e, direct_sum(w, z));
    check.expect(is_perfect_rep(block).perfect, "FIX-E block rep perfect");
    auto block_basis = heuristic_basis_search(block);
    check.expect(block_basis.has_value(), "block basis found");
    if (block_basis) {
        PhiMap phi = phi_map(block, *block_basis);
        check.expect(!phi.single_class, "basis-to-path map hits two classes");
        long long class_rank = static_cast<long long>(w.basis.size());
        check.expect(block.dim == 2 * class_rank, "abstract rank equals twice the class rank");
        IrredVerdict v = decide_irreducible(block, *block_basis);
        check.expect(!v.irreducible, "reducible verdict");
        check.expect(v.invariant_basis.size() == 2, "invariant subspace dimension");
        // verified invariance, explicitly
        SpanBuilder span(Q, block.dim);
        for (const auto& vec : v.invariant_basis) span.add(vec);
        bool invariant = true;
        auto stays = [&](const Matrix& mat) {
            for (const auto& vec : v.invariant_basis)
                if (!span.contains(mat.apply(vec))) invariant = false;
        };
        for (const auto& [key, mat] : block.p) {
            (void)key;
            stays(mat);
        }
        for (const auto& [key, mat] : block.s) {
            (void)key;
            stays(mat);
        }
        for (const auto& [key, mat] : block.t) {
            (void)key;
            stays(mat);
        }
        check.expect(invariant, "witness subspace is invariant");
    }
    return {9, "permutative pipeline: FIX-D irreducible, FIX-E block reducible with witness",
            check.ok, check.ok ? "rank flags and witnesses verified" : check.failure};
}

inline const std::vector<std::pair<const char*, const char*>>& expression_corpus() {
    static const std::vector<std::pair<const char*, const char*>> corpus = {
        {"p({v0}) - s(e1)", "FIX-B.json"},
        {"s(e)*t(e)", "FIX-B.json"},
        {"p(r(e1) & {v})", "FIX-A.json"},
        {"s(e1)", "FIX-A.json"},
        {"t(e2)", "FIX-A.json"},
        {"p(v)", "FIX-A.json"},
        {"p(u | v)", "FIX-A.json"},
        {"p(w[3])", "FIX-A.json"},
        {"p({u, v, w[2]})", "FIX-A.json"},
        {"p({})", "FIX-A.json"},
        {"p(r(e1))", "FIX-A.json"},
        {"p(r(e1) | r(e2))", "FIX-A.json"},
        {"p(r(e1) & r(e2))", "FIX-A.json"},
        {"p((r(e1) | {u}) & r(e2))", "FIX-A.json"},
        {"s(e1)*s(e2)", "FIX-A.json"},
        {"s(e1)*s(e2)*t(e2)", "FIX-A.json"},
        {"t(e1)*s(e1)", "FIX-A.json"},
        {"t(e1)*s(e2)", "FIX-A.json"},
        {"s(e1) + s(e2)", "FIX-A.json"},
        {"s(e1) - s(e2)", "FIX-A.json"},
        {"s(e1) + s(e2) - t(e1)", "FIX-A.json"},
        {"s(e1)*(s(e2) + t(e2))", "FIX-A.json"},
        {"(s(e1) + s(e2))*t(e2)", "FIX-A.json"},
        {"2*s(e1)", "FIX-A.json"},
        {"-3*s(e1)", "FIX-A.json"},
        {"1/2*s(e1) + 1/3*s(e2)", "FIX-A.json"},
        {"-7/2*p(v)", "FIX-A.json"},
        {"0*s(e1)", "FIX-A.json"},
        {"5", "FIX-A.json"},
        {"-5", "FIX-A.json"},
        {"2 - 3", "FIX-A.json"},
        {"2*3", "FIX-A.json"},
        {"p(v)*p(u)", "FIX-A.json"},
        {"p(v)*s(e2)*t(e2)*p(v)", "FIX-A.json"},
        {"s(e2)*s(e2)*s(e2)", "FIX-A.json"},
        {"t(e2)*t(e2)", "FIX-A.json"},
        {"p({w[1], w[2]})", "FIX-A.json"},
        {"p(r(e1) & w[5])", "FIX-A.json"},
        {"s(e1)*p(v)*t(e1)", "FIX-A.json"},
        {"s(e1)*p(r(e2))*t(e1)", "FIX-A.json"},
        {"p(u)*s(e1) - s(e1)*p(r(e1))", "FIX-A.json"},
        {"s(e)*p({v0} | r(e1))*t(e)", "FIX-B.json"},
        {"p({v0})*s(e1)*t(e1)", "FIX-B.json"},
        {"t(e)*s(e) - p(r(e))", "FIX-B.json"},
        {"s(e1)*s(e1) + s(e1) + p(v0)", "FIX-B.json"},
        {"1 - p({v0})", "FIX-B.json"},
        {"p((({v0})))", "FIX-B.json"},
        {"p({u}) + p({v0}) - p({u, v0})", "FIX-B.json"},
        {"s(e)*t(e)*s(e)*t(e)", "FIX-B.json"},
        {"2/4*s(e) - -1*t(e)", "FIX-B.json"},
    };
    return corpus;
}

// 10. Parser fixpoint on the fifty-expression corpus, and reduction soundness
//     against the generator-composition route, 200 seeded cases per fixture.
inline CriterionResult criterion_10(const Context& ctx) {
    Checker check;
    const auto& corpus = expression_corpus();
    check.expect(corpus.size() == 50, "corpus size");
    for (const auto& [text, fixture] : corpus) {
        Ultragraph g = ctx.fixture(fixture);
        ExprPtr first = parse_expr(text, g, Q);
        std::string printed = print_expr(first, Q);
        ExprPtr second = parse_expr(printed, g, Q);
        check.expect(expr_eq(first, second), std::string("fixpoint tree: ") + text);
        check.expect(print_expr(second, Q) == printed, std::string("fixpoint text: ") + text);
    }
    for (const auto& name : {"FIX-A.json", "FIX-B.json", "FIX-C.json", "FIX-D.json", "FIX-E.json"}) {
        Ultragraph g = ctx.fixture(name);
        auto family = relation_family(g, 4, 2);
        std::mt19937 rng(ctx.seed + 10);
        for (int iter = 0; iter < 200; ++iter) {
            ExprPtr ast = random_ast(g, rng, 3);
            AlgebraElement reduced = reduce_to_spanning(g, ast, Q);
            for (const auto& b : family) {
                Vector direct = ast_act(g, ast, unit_vector(Q, b));
                Vector via = act(g, reduced, unit_vector(Q, b));
                if (!(direct == via)) {
                    check.expect(false, std::string(name) + ": reduction soundness for " +
                                            print_expr(ast, Q) + " at " + path_literal(g, b));
                    break;
                }
                ++check.checks;
            }
            if (!check.ok) break;
        }
        if (!check.ok) break;
    }
    return {10, "parser fixpoint (50 expressions) and reduction soundness (200 per fixture)",
            check.ok, check.ok ? std::to_string(check.checks) + " comparisons" : check.failure};
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(const std::string& fixtures_dir, unsigned seed) {
    acceptance::Context ctx{fixtures_dir, seed};
    std::vector<std::function<CriterionResult(const acceptance::Context&)>> criteria = {
        acceptance::criterion_1, acceptance::criterion_2, acceptance::criterion_3,
        acceptance::criterion_4, acceptance::criterion_5, acceptance::criterion_6,
        acceptance::criterion_7, acceptance::criterion_8, acceptance::criterion_9,
        acceptance::criterion_10};
    std::vector<CriterionResult> results;
    int number = 1;
    for (const auto& run : criteria) {
        try {
            results.push_back(run(ctx));
        } catch (const std::exception& e) {
            results.push_back(
                {number, "criterion " + std::to_string(number), false,
                 std::string("exception: ") + e.what()});
        }
        ++number;
    }
    return results;
}

inline std::string format_acceptance(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    int passed = 0;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.number << ": " << r.title << " ("
            << r.detail << ")\n";
        if (r.pass) ++passed;
    }
    out << passed << "/" << results.size() << " criteria passed\n";
    return out.str();
}

}  // namespace ulpa
