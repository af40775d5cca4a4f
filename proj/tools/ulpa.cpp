// Command line driver for the ultragraph algebra library.
//
// Exit codes: 0 success / affirmative verdict, 1 negative verdict, 2 input
// error. Reports are deterministic: identical inputs and seed give byte
// identical output.
#include <CLI11.hpp>
#include <iostream>

#include <ulpa/acceptance.hpp>
#include <ulpa/json_io.hpp>
#include <ulpa/permutative.hpp>
#include <ulpa/zero_test.hpp>

namespace {

using namespace ulpa;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_error = 2;

// Ordered key/value report, printable as text or JSON.
class Report {
public:
    void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, bool value) {
        add(key, value ? std::string("yes") : std::string("no"));
    }
    template <class T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
    void add(const std::string& key, T value) {
        add(key, std::to_string(static_cast<long long>(value)));
    }

    void print(bool as_json) const {
        if (as_json) {
            json j = json::object();
            for (const auto& [k, v] : lines_) {
                if (j.contains(k)) {
                    // repeated keys become arrays
                    if (!j[k].is_array()) j[k] = json::array({j[k]});
                    j[k].push_back(v);
                } else {
                    j[k] = v;
                }
            }
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& [k, v] : lines_) std::cout << k << ": " << v << "\n";
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

struct Options {
    std::string ring = "Q";
    int bound = 6;
    int cycle_bound = 0;  // 0: number of vertices
    long long family_bound = 0;  // 0: max mentioned + 1
    unsigned seed = 0;
    bool as_json = false;
};

Ring ring_of(const Options& o) { return Ring::parse(o.ring); }

int cycle_bound_of(const Options& o, const Ultragraph& g) {
    if (o.cycle_bound > 0) return o.cycle_bound;
    return std::max<int>(1, static_cast<int>(g.vertex_names().size()));
}

long long family_bound_of(const Options& o, const Ultragraph& g) {
    if (o.family_bound > 0) return o.family_bound;
    return g.default_family_bound();
}

std::string regime_note(const Ultragraph& g) {
    return condition_l(g).satisfied ? "Condition (L) holds - faithful regime"
                                    : "Condition (L) fails - algebra equality undecided";
}

// ---- ug ------------------------------------------------------------------

int run_ug_validate(const std::string& file, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    r.add("command", "ug validate");
    r.add("file", file);
    r.add("vertices", static_cast<long long>(g.vertex_names().size()));
    r.add("families", static_cast<long long>(g.family_names().size()));
    r.add("edges", g.edge_count());
    r.add("valid", true);
    r.print(o.as_json);
    return exit_ok;
}

int run_ug_gzero(const std::string& file, const std::string& set_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    VertexSet s = resolve(g, parse_set_expr(set_text, g));
    r.add("command", "ug gzero");
    r.add("set", display(s));
    bool member = gzero_membership(g, s);
    r.add("generalized vertex", member);
    r.print(o.as_json);
    return member ? exit_ok : exit_negative;
}

int run_ug_sinks(const std::string& file, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    r.add("command", "ug sinks");
    r.add("sinks", display(sinks(g)));
    r.print(o.as_json);
    return exit_ok;
}

int run_ug_condition_l(const std::string& file, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    ConditionLReport report = condition_l(g);
    r.add("command", "ug condition-l");
    r.add("satisfied", report.satisfied);
    if (!report.satisfied) r.add("witness", edge_word(g, report.witness));
    r.print(o.as_json);
    return report.satisfied ? exit_ok : exit_negative;
}

// ---- paths -----------------------------------------------------------------

int run_paths_enum(const std::string& file, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    long long fb = family_bound_of(o, g);
    r.add("command", "paths enum");
    r.add("stem bound", o.bound);
    r.add("cycle bound", cycle_bound_of(o, g));
    r.add("family bound", fb);
    for (const auto& p : enumerate_pstar(g, o.bound, fb))
        r.add("sink path", path_literal(g, BasisPath{p}));
    for (const auto& l : enumerate_lassos(g, o.bound, cycle_bound_of(o, g)))
        r.add("lasso", path_literal(g, BasisPath{l}));
    r.print(o.as_json);
    return exit_ok;
}

int run_paths_classes(const std::string& file, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    long long fb = family_bound_of(o, g);
    r.add("command", "paths classes");
    std::set<EquivClass, EquivClassLess> classes;
    for (const auto& p : enumerate_pstar(g, o.bound, fb))
        classes.insert(tail_class(g, BasisPath{p}));
    for (const auto& l : enumerate_lassos(g, o.bound, cycle_bound_of(o, g)))
        classes.insert(tail_class(g, BasisPath{l}));
    for (const auto& c : classes) {
        ClassMembers cm = class_members(g, c, 0);
        r.add("class", class_literal(g, c) + (cm.finite
                                                  ? " [finite, " + std::to_string(cm.size) + " members]"
                                                  : " [infinite]"));
    }
    r.print(o.as_json);
    return exit_ok;
}

int run_paths_members(const std::string& file, const std::string& class_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    EquivClass c = parse_class(g, class_text);
    ClassMembers cm = class_members(g, c, o.bound);
    r.add("command", "paths members");
    r.add("class", class_literal(g, c));
    r.add("finite", cm.finite);
    if (cm.finite) r.add("size", cm.size);
    for (const auto& m : cm.members) r.add("member", path_literal(g, m));
    r.print(o.as_json);
    return exit_ok;
}

// ---- alg -------------------------------------------------------------------

int run_alg_reduce(const std::string& file, const std::string& expr_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    AlgebraElement x = reduce_to_spanning(g, parse_expr(expr_text, g, ring), ring);
    r.add("command", "alg reduce");
    r.add("ring", ring.name());
    r.add("input", expr_text);
    r.add("spanning form", display(g, x));
    r.add("terms", static_cast<long long>(x.terms().size()));
    r.print(o.as_json);
    return exit_ok;
}

int run_alg_zero(const std::string& file, const std::string& expr_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    AlgebraElement x = reduce_to_spanning(g, parse_expr(expr_text, g, ring), ring);
    ZeroVerdict v = zero_test(g, x, o.bound);
    r.add("command", "alg zero");
    r.add("ring", ring.name());
    r.add("verdict", v.regime());
    r.add("regime", regime_note(g));
    if (v.witness) r.add("witness", path_literal(g, *v.witness));
    r.print(o.as_json);
    return v.zero ? exit_ok : exit_negative;
}

int run_alg_equal(const std::string& file, const std::string& lhs, const std::string& rhs,
                  const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    AlgebraElement x = reduce_to_spanning(g, parse_expr(lhs, g, ring), ring);
    AlgebraElement y = reduce_to_spanning(g, parse_expr(rhs, g, ring), ring);
    ZeroVerdict v = equal_test(g, x, y, o.bound);
    r.add("command", "alg equal");
    r.add("ring", ring.name());
    r.add("equal", v.zero);
    r.add("regime", regime_note(g));
    if (v.witness) r.add("witness", path_literal(g, *v.witness));
    r.print(o.as_json);
    return v.zero ? exit_ok : exit_negative;
}

// ---- rep -------------------------------------------------------------------

int run_rep_restrict(const std::string& file, const std::string& class_text, const Options& o) {
    Ultragraph g = load_ultragraph(file);
    ClassRep rep = restrict_class(g, parse_class(g, class_text), ring_of(o));
    std::cout << class_rep_to_json(g, rep).dump(2) << "\n";
    return exit_ok;
}

int run_rep_act(const std::string& file, const std::string& expr_text,
                const std::string& vector_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    AlgebraElement x = reduce_to_spanning(g, parse_expr(expr_text, g, ring), ring);
    Vector v = parse_vector(g, vector_text, ring);
    Vector moved = act(g, x, v);
    r.add("command", "rep act");
    r.add("ring", ring.name());
    r.add("result", display(g, moved));
    r.print(o.as_json);
    return exit_ok;
}

int run_rep_commutant(const std::string& file, const std::string& class_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    ClassRep rep = restrict_class(g, parse_class(g, class_text), ring_of(o));
    r.add("command", "rep commutant");
    r.add("class", class_literal(g, rep.classes.front()));
    r.add("commutant dimension", commutant_dim(rep));
    r.print(o.as_json);
    return exit_ok;
}

int run_rep_intertwine(const std::string& file, const std::string& class1,
                       const std::string& class2, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    ClassRep c1 = restrict_class(g, parse_class(g, class1), ring);
    ClassRep c2 = restrict_class(g, parse_class(g, class2), ring);
    long long dim = intertwiner_dim(c1, c2);
    r.add("command", "rep intertwine");
    r.add("intertwiner dimension", dim);
    r.add("verdict", dim == 0 ? std::string("no nonzero intertwiner: representations not equivalent")
                              : std::string("intertwiner space is nonzero"));
    r.print(o.as_json);
    return dim > 0 ? exit_ok : exit_negative;
}

int run_rep_witness(const std::string& file, const std::string& vector_text, const Options& o) {
    Report r;
    Ultragraph g = load_ultragraph(file);
    Ring ring = ring_of(o);
    Vector v = parse_vector(g, vector_text, ring);
    IsolationWitness wit = isolate_witness(g, v);
    r.add("command", "rep witness");
    r.add("monomial", display(g, wit.monomial));
    r.add("target", path_literal(g, wit.target));
    r.add("coefficient", ring.str(wit.coefficient));
    r.print(o.as_json);
    return exit_ok;
}

// ---- bs --------------------------------------------------------------------

int run_bs_validate(const std::string& file, const Options& o) {
    Report r;
    r.add("command", "bs validate");
    try {
        BranchingSystem b = load_branching_system(file);
        r.add("points", b.n);
        r.add("valid", true);
        r.print(o.as_json);
        return exit_ok;
    } catch (const Error& e) {
        std::string what = e.what();
        if (what.find("axiom") == std::string::npos) throw;
        r.add("valid", false);
        r.add("violations", what);
        r.print(o.as_json);
        return exit_negative;
    }
}

int run_bs_perfect(const std::string& file, const Options& o) {
    Report r;
    BranchingSystem b = load_branching_system(file);
    bool perfect = is_perfect_bs(b);
    r.add("command", "bs perfect");
    r.add("perfect", perfect);
    r.print(o.as_json);
    return perfect ? exit_ok : exit_negative;
}

int run_bs_induce(const std::string& file, const Options& o) {
    BranchingSystem b = load_branching_system(file);
    MatrixRep m = induce_rep(b, ring_of(o));
    std::cout << matrix_rep_to_json(m, referenced_ultragraph(file)).dump(2) << "\n";
    return exit_ok;
}

int run_bs_morphism(const std::string& file, const Options& o) {
    Report r;
    BranchingSystem b = load_branching_system(file);
    MorphismMap t = compute_t(b);
    MorphismCheck check = verify_morphism(t);
    r.add("command", "bs morphism");
    for (const auto& [x, p] : t.targets)
        r.add("T(" + std::to_string(x) + ")", path_literal(b.g, p));
    r.add("morphism verified", check.ok);
    if (!check.ok) r.add("failure", check.first_failure);
    ClosureCheck closure = image_class_closure(t);
    r.add("image class closure", closure.closed);
    r.print(o.as_json);
    return check.ok && closure.closed ? exit_ok : exit_negative;
}

int run_bs_irreducible(const std::string& file, const Options& o) {
    Report r;
    BranchingSystem b = load_branching_system(file);
    Ring ring = ring_of(o);
    if (!ring.is_field()) throw Error("irreducibility needs a field, not " + ring.name());
    BsIrredVerdict v = bs_irreducibility(b);
    r.add("command", "bs irreducible");
    r.add("ring", ring.name());
    if (v.isomorphic) {
        r.add("verdict", "isomorphic to class " + class_literal(b.g, *v.cls) +
                             "; induced representation irreducible");
    } else {
        r.add("verdict", "not isomorphic to a class");
        r.add("reason", v.reason);
    }
    r.print(o.as_json);
    return v.isomorphic ? exit_ok : exit_negative;
}

// ---- perm ------------------------------------------------------------------

BasisAssignment basis_for(const MatrixRep& m, const std::string& basis_file) {
    if (!basis_file.empty()) return load_basis_assignment(basis_file, m);
    auto found = heuristic_basis_search(m);
    if (!found)
        throw Error("no permutative basis found heuristically; provide one with --basis");
    return *found;
}

int run_perm_verify(const std::string& file, const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    RelationCheck check = verify_matrix_rep(m);
    r.add("command", "perm verify");
    r.add("relations hold", check.ok);
    if (!check.ok) r.add("failure", check.first_failure);
    r.print(o.as_json);
    return check.ok ? exit_ok : exit_negative;
}

int run_perm_perfect(const std::string& file, const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    PerfectReport report = is_perfect_rep(m);
    r.add("command", "perm perfect");
    r.add("perfect", report.perfect);
    if (!report.perfect) r.add("reason", report.detail);
    r.print(o.as_json);
    return report.perfect ? exit_ok : exit_negative;
}

int run_perm_permutative(const std::string& file, const std::string& basis_file,
                         const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    r.add("command", "perm permutative");
    if (basis_file.empty()) {
        auto found = heuristic_basis_search(m);
        r.add("basis found", found.has_value());
        if (found) r.add("permutative", true);
        r.print(o.as_json);
        return found ? exit_ok : exit_negative;
    }
    BasisAssignment b = load_basis_assignment(basis_file, m);
    bool permutative = is_permutative_with(m, b);
    r.add("permutative", permutative);
    r.print(o.as_json);
    return permutative ? exit_ok : exit_negative;
}

int run_perm_extract(const std::string& file, const std::string& basis_file, const Options&) {
    MatrixRep m = load_matrix_rep(file);
    BranchingSystem b = extract_bs(m, basis_for(m, basis_file));
    std::cout << branching_to_json(b, referenced_ultragraph(file)).dump(2) << "\n";
    return exit_ok;
}

int run_perm_phi(const std::string& file, const std::string& basis_file, const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    PhiMap phi = phi_map(m, basis_for(m, basis_file));
    r.add("command", "perm phi");
    for (const auto& [x, p] : phi.table)
        r.add("phi(" + std::to_string(x) + ")", path_literal(m.g, p));
    r.add("injective", phi.injective);
    r.add("single class", phi.single_class);
    r.add("onto class", phi.onto_class);
    if (phi.cls) r.add("class", class_literal(m.g, *phi.cls));
    r.print(o.as_json);
    return exit_ok;
}

int run_perm_irreducible(const std::string& file, const std::string& basis_file,
                         const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    IrredVerdict v = decide_irreducible(m, basis_for(m, basis_file));
    r.add("command", "perm irreducible");
    r.add("module rank", v.module_rank);
    if (v.class_size > 0) r.add("class size", v.class_size);
    if (v.irreducible) {
        r.add("verdict", "irreducible: module isomorphic to class " + class_literal(m.g, *v.cls) +
                             " through the basis-to-path map");
    } else {
        r.add("verdict", "reducible");
        r.add("reason", v.reason);
        r.add("invariant subspace dimension",
              static_cast<long long>(span_rank(m.ring, m.dim, v.invariant_basis)));
    }
    r.print(o.as_json);
    return v.irreducible ? exit_ok : exit_negative;
}

int run_perm_invariant(const std::string& file, const Options& o) {
    Report r;
    MatrixRep m = load_matrix_rep(file);
    auto found = find_invariant_submodule(m);
    r.add("command", "perm invariant");
    r.add("found", found.has_value());
    if (found) {
        r.add("dimension", static_cast<long long>(span_rank(m.ring, m.dim, *found)));
    } else {
        r.add("note", "cyclic search found nothing; not a proof of irreducibility");
    }
    r.print(o.as_json);
    return found ? exit_ok : exit_negative;
}

int run_acceptance_cmd(const std::string& fixtures, const Options& o) {
    for (const char* name : {"FIX-A.json", "FIX-B.json", "FIX-C.json", "FIX-D.json", "FIX-E.json",
                             "FIX-F.json", "FIX-G.json"})
        if (!std::filesystem::exists(std::filesystem::path(fixtures) / name))
            throw Error("missing fixture file: " + (std::filesystem::path(fixtures) / name).string());
    auto results = run_acceptance(fixtures, o.seed);
    std::cout << format_acceptance(results);
    for (const auto& r : results)
        if (!r.pass) return exit_negative;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computation with ultragraph Leavitt path algebras"};
    app.require_subcommand(1);
    Options opt;

    std::string file, arg1, arg2, basis_file, fixtures = ULPA_FIXTURES_DIR;
    std::vector<std::function<int()>> action(1);
    auto& run = action[0];

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--ring", opt.ring, "coefficient ring: Z, Q or Z/n");
        cmd->add_option("--bound", opt.bound, "stem length bound (default 6)");
        cmd->add_option("--cycle-bound", opt.cycle_bound, "cycle length bound (default: vertex count)");
        cmd->add_option("--family-bound", opt.family_bound,
                        "family index bound (default: max mentioned + 1)");
        cmd->add_option("--seed", opt.seed, "seed for randomized suites");
        cmd->add_flag("--json", opt.as_json, "machine-readable report");
    };

    auto* ug = app.add_subcommand("ug", "ultragraph operations");
    {
        auto* c = ug->add_subcommand("validate", "validate an ultragraph file");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_ug_validate(file, opt); }; });
        c = ug->add_subcommand("gzero", "generalized-vertex membership of a set expression");
        c->add_option("file", file)->required();
        c->add_option("set", arg1, "set expression")->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_ug_gzero(file, arg1, opt); }; });
        c = ug->add_subcommand("sinks", "the sink set");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_ug_sinks(file, opt); }; });
        c = ug->add_subcommand("condition-l", "decide Condition (L)");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_ug_condition_l(file, opt); }; });
    }

    auto* paths = app.add_subcommand("paths", "path enumeration and classes");
    {
        auto* c = paths->add_subcommand("enum", "bounded sink paths and lassos");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_paths_enum(file, opt); }; });
        c = paths->add_subcommand("classes", "tail classes within the bounds");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_paths_classes(file, opt); }; });
        c = paths->add_subcommand("members", "members of one class");
        c->add_option("file", file)->required();
        c->add_option("class", arg1, "class literal or path literal")->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_paths_members(file, arg1, opt); }; });
    }

    auto* alg = app.add_subcommand("alg", "algebra elements and the evaluation oracle");
    {
        auto* c = alg->add_subcommand("reduce", "reduce an expression to spanning form");
        c->add_option("file", file)->required();
        c->add_option("expr", arg1)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_alg_reduce(file, arg1, opt); }; });
        c = alg->add_subcommand("zero", "zero test through the representation");
        c->add_option("file", file)->required();
        c->add_option("expr", arg1)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_alg_zero(file, arg1, opt); }; });
        c = alg->add_subcommand("equal", "equality test through the representation");
        c->add_option("file", file)->required();
        c->add_option("lhs", arg1)->required();
        c->add_option("rhs", arg2)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_alg_equal(file, arg1, arg2, opt); }; });
    }

    auto* rep = app.add_subcommand("rep", "the path representation and class restrictions");
    {
        auto* c = rep->add_subcommand("restrict", "matrices of one finite class");
        c->add_option("file", file)->required();
        c->add_option("class", arg1)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_rep_restrict(file, arg1, opt); }; });
        c = rep->add_subcommand("act", "apply an element to a vector");
        c->add_option("file", file)->required();
        c->add_option("expr", arg1)->required();
        c->add_option("vector", arg2)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_rep_act(file, arg1, arg2, opt); }; });
        c = rep->add_subcommand("commutant", "commutant dimension of a class restriction");
        c->add_option("file", file)->required();
        c->add_option("class", arg1)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_rep_commutant(file, arg1, opt); }; });
        c = rep->add_subcommand("intertwine", "intertwiner dimension between two classes");
        c->add_option("file", file)->required();
        c->add_option("class1", arg1)->required();
        c->add_option("class2", arg2)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_rep_intertwine(file, arg1, arg2, opt); }; });
        c = rep->add_subcommand("witness", "isolation witness for a vector");
        c->add_option("file", file)->required();
        c->add_option("vector", arg1)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_rep_witness(file, arg1, opt); }; });
    }

    auto* bs = app.add_subcommand("bs", "branching systems");
    {
        auto* c = bs->add_subcommand("validate", "check the five axioms");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_bs_validate(file, opt); }; });
        c = bs->add_subcommand("perfect", "perfectness check");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_bs_perfect(file, opt); }; });
        c = bs->add_subcommand("induce", "induced matrix representation");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_bs_induce(file, opt); }; });
        c = bs->add_subcommand("morphism", "trajectory map and morphism verification");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_bs_morphism(file, opt); }; });
        c = bs->add_subcommand("irreducible", "isomorphism with a path class");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_bs_irreducible(file, opt); }; });
    }

    auto* perm = app.add_subcommand("perm", "matrix representation analysis");
    {
        auto* c = perm->add_subcommand("verify", "check the defining relations");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_verify(file, opt); }; });
        c = perm->add_subcommand("perfect", "perfectness of a representation");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_perfect(file, opt); }; });
        c = perm->add_subcommand("permutative", "permutativity for a basis");
        c->add_option("file", file)->required();
        c->add_option("--basis", basis_file, "basis assignment file");
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_permutative(file, basis_file, opt); }; });
        c = perm->add_subcommand("extract", "branching system of a permutative basis");
        c->add_option("file", file)->required();
        c->add_option("--basis", basis_file, "basis assignment file");
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_extract(file, basis_file, opt); }; });
        c = perm->add_subcommand("phi", "basis-to-path table and flags");
        c->add_option("file", file)->required();
        c->add_option("--basis", basis_file, "basis assignment file");
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_phi(file, basis_file, opt); }; });
        c = perm->add_subcommand("irreducible", "irreducibility decision");
        c->add_option("file", file)->required();
        c->add_option("--basis", basis_file, "basis assignment file");
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_irreducible(file, basis_file, opt); }; });
        c = perm->add_subcommand("invariant", "cyclic search for invariant subspaces");
        c->add_option("file", file)->required();
        add_common(c);
        c->callback([&] { run = [&] { return run_perm_invariant(file, opt); }; });
    }

    auto* acc = app.add_subcommand("acceptance", "run the acceptance suite");
    acc->add_option("--fixtures", fixtures, "fixtures directory");
    add_common(acc);
    acc->callback([&] { run = [&] { return run_acceptance_cmd(fixtures, opt); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        return run ? run() : exit_error;
    } catch (const Error& e) {
        std::cout << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
        return exit_error;
    }
}
