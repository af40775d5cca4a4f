#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <ulpa/paths.hpp>
#include <ulpa/ring.hpp>
#include <ulpa/ultragraph.hpp>

namespace ulpa {

// Set expressions over vertex atoms, family members, edge ranges and braced
// lists, combined with "|" and "&".
struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetAtomVertex {
    std::string name;
    friend bool operator==(const SetAtomVertex&, const SetAtomVertex&) = default;
};
struct SetAtomFamily {
    std::string family;
    long long index;
    friend bool operator==(const SetAtomFamily&, const SetAtomFamily&) = default;
};
struct SetAtomRange {
    std::string edge;
    friend bool operator==(const SetAtomRange&, const SetAtomRange&) = default;
};
struct SetAtomList {
    std::vector<std::variant<SetAtomVertex, SetAtomFamily>> items;
    friend bool operator==(const SetAtomList&, const SetAtomList&) = default;
};
struct SetBinary {
    char op;  // '|' or '&'
    SetExprPtr left, right;
};

struct SetExpr {
    std::variant<SetAtomVertex, SetAtomFamily, SetAtomRange, SetAtomList, SetBinary> node;
};

inline bool set_expr_eq(const SetExprPtr& a, const SetExprPtr& b) {
    if (a->node.index() != b->node.index()) return false;
    if (const auto* x = std::get_if<SetBinary>(&a->node)) {
        const auto& y = std::get<SetBinary>(b->node);
        return x->op == y.op && set_expr_eq(x->left, y.left) && set_expr_eq(x->right, y.right);
    }
    if (a->node.index() == 0) return std::get<0>(a->node) == std::get<0>(b->node);
    if (a->node.index() == 1) return std::get<1>(a->node) == std::get<1>(b->node);
    if (a->node.index() == 2) return std::get<2>(a->node) == std::get<2>(b->node);
    return std::get<3>(a->node) == std::get<3>(b->node);
}

inline VertexSet resolve(const Ultragraph& g, const SetExprPtr& e) {
    if (const auto* v = std::get_if<SetAtomVertex>(&e->node))
        return VertexSet::single(Vertex::named(v->name));
    if (const auto* f = std::get_if<SetAtomFamily>(&e->node))
        return VertexSet::single(Vertex::family_member(f->family, f->index));
    if (const auto* r = std::get_if<SetAtomRange>(&e->node)) return g.edge(g.edge_id(r->edge)).range;
    if (const auto* l = std::get_if<SetAtomList>(&e->node)) {
        VertexSet s;
        for (const auto& item : l->items) {
            if (const auto* v = std::get_if<SetAtomVertex>(&item))
                s = set_union(s, VertexSet::single(Vertex::named(v->name)));
            else {
                const auto& f = std::get<SetAtomFamily>(item);
                s = set_union(s, VertexSet::single(Vertex::family_member(f.family, f.index)));
            }
        }
        return s;
    }
    const auto& b = std::get<SetBinary>(e->node);
    VertexSet left = resolve(g, b.left), right = resolve(g, b.right);
    return b.op == '|' ? set_union(left, right) : set_intersect(left, right);
}

// Algebra expressions: scalars, generators s(e), t(e) (the adjoint symbol),
// projections p(setexpr), and +, -, *.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct ExprScalar {
    Scalar value;
};
struct ExprGenS {
    std::string edge;
};
struct ExprGenT {
    std::string edge;
};
struct ExprGenP {
    SetExprPtr set;
};
struct ExprBinary {
    char op;  // '+', '-', '*'
    ExprPtr left, right;
};

struct Expr {
    std::variant<ExprScalar, ExprGenS, ExprGenT, ExprGenP, ExprBinary> node;
};

inline bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
    if (a->node.index() != b->node.index()) return false;
    if (const auto* x = std::get_if<ExprScalar>(&a->node))
        return x->value == std::get<ExprScalar>(b->node).value;
    if (const auto* x = std::get_if<ExprGenS>(&a->node))
        return x->edge == std::get<ExprGenS>(b->node).edge;
    if (const auto* x = std::get_if<ExprGenT>(&a->node))
        return x->edge == std::get<ExprGenT>(b->node).edge;
    if (const auto* x = std::get_if<ExprGenP>(&a->node))
        return set_expr_eq(x->set, std::get<ExprGenP>(b->node).set);
    const auto& x = std::get<ExprBinary>(a->node);
    const auto& y = std::get<ExprBinary>(b->node);
    return x.op == y.op && expr_eq(x.left, y.left) && expr_eq(x.right, y.right);
}

namespace detail {

class ExprParser {
public:
    ExprParser(std::string text, const Ultragraph& g, const Ring& ring)
        : text_(std::move(text)), g_(g), ring_(ring) {}

    ExprPtr parse_expression() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

    SetExprPtr parse_set_expression() {
        SetExprPtr e = parse_setexpr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error("syntax error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_digit() {
        skip_ws();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    long long parse_int() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer");
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::stoll(text_.substr(start, pos_ - start));
    }

    std::string parse_ident() {
        skip_ws();
        size_t start = pos_;
        auto ok = [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
        };
        if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                      text_[pos_] == '_'))
            fail("expected identifier");
        while (pos_ < text_.size() && ok(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    // Children are parsed into locals before the node is built: evaluating a
    // throwing parse inside an aggregate initializer leaks the siblings under
    // gcc 11 (partially constructed aggregates skip member destructors).
    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (true) {
            skip_ws();
            char op;
            if (eat('+'))
                op = '+';
            else if (eat('-'))
                op = '-';
            else
                return e;
            ExprPtr rhs = parse_term();
            e = std::make_shared<Expr>(Expr{ExprBinary{op, e, std::move(rhs)}});
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (eat('*')) {
            ExprPtr rhs = parse_factor();
            e = std::make_shared<Expr>(Expr{ExprBinary{'*', e, std::move(rhs)}});
        }
        return e;
    }

    ExprPtr parse_factor() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected factor");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            size_t at = pos_;
            long long num = parse_int();
            long long den = 1;
            if (eat('/')) den = parse_int();
            try {
                return std::make_shared<Expr>(Expr{ExprScalar{ring_.make(num, den)}});
            } catch (const Error& err) {
                pos_ = at;
                fail(err.what());
            }
        }
        std::string ident = parse_ident();
        if (ident == "s" && peek('(')) {
            ++pos_;
            std::string edge = parse_ident();
            if (!g_.has_edge(edge)) fail("unknown edge: " + edge);
            expect(')');
            return std::make_shared<Expr>(Expr{ExprGenS{edge}});
        }
        if (ident == "t" && peek('(')) {
            ++pos_;
            std::string edge = parse_ident();
            if (!g_.has_edge(edge)) fail("unknown edge: " + edge);
            expect(')');
            return std::make_shared<Expr>(Expr{ExprGenT{edge}});
        }
        if (ident == "p" && peek('(')) {
            ++pos_;
            SetExprPtr set = parse_setexpr();
            expect(')');
            return std::make_shared<Expr>(Expr{ExprGenP{set}});
        }
        fail("unknown factor: " + ident);
    }

    SetExprPtr parse_setexpr() {
        SetExprPtr e = parse_atom();
        while (true) {
            skip_ws();
            char op;
            if (eat('|'))
                op = '|';
            else if (eat('&'))
                op = '&';
            else
                return e;
            SetExprPtr rhs = parse_atom();
            e = std::make_shared<SetExpr>(SetExpr{SetBinary{op, e, std::move(rhs)}});
        }
    }

    std::variant<SetAtomVertex, SetAtomFamily> parse_vertex_atom() {
        std::string ident = parse_ident();
        if (eat('[')) {
            if (!g_.has_family(ident)) fail("unknown family: " + ident);
            long long idx = parse_int();
            if (idx < 1) fail("family indices start at 1");
            expect(']');
            return SetAtomFamily{ident, idx};
        }
        if (!g_.has_vertex(ident)) fail("unknown vertex: " + ident);
        return SetAtomVertex{ident};
    }

    SetExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected set atom");
        if (eat('(')) {
            SetExprPtr e = parse_setexpr();
            expect(')');
            return e;
        }
        if (eat('{')) {
            SetAtomList list;
            if (!peek('}'))
                do {
                    list.items.push_back(parse_vertex_atom());
                } while (eat(','));
            expect('}');
            return std::make_shared<SetExpr>(SetExpr{list});
        }
        size_t at = pos_;
        std::string ident = parse_ident();
        if (ident == "r" && peek('(')) {
            ++pos_;
            std::string edge = parse_ident();
            if (!g_.has_edge(edge)) fail("unknown edge: " + edge);
            expect(')');
            return std::make_shared<SetExpr>(SetExpr{SetAtomRange{edge}});
        }
        pos_ = at;
        auto atom = parse_vertex_atom();
        if (const auto* v = std::get_if<SetAtomVertex>(&atom))
            return std::make_shared<SetExpr>(SetExpr{*v});
        return std::make_shared<SetExpr>(SetExpr{std::get<SetAtomFamily>(atom)});
    }

    std::string text_;
    size_t pos_ = 0;
    const Ultragraph& g_;
    const Ring& ring_;
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text, const Ultragraph& g, const Ring& ring) {
    return detail::ExprParser(text, g, ring).parse_expression();
}

inline SetExprPtr parse_set_expr(const std::string& text, const Ultragraph& g) {
    return detail::ExprParser(text, g, Ring::rationals()).parse_set_expression();
}

inline std::string print_set_expr(const SetExprPtr& e) {
    if (const auto* v = std::get_if<SetAtomVertex>(&e->node)) return v->name;
    if (const auto* f = std::get_if<SetAtomFamily>(&e->node))
        return f->family + "[" + std::to_string(f->index) + "]";
    if (const auto* r = std::get_if<SetAtomRange>(&e->node)) return "r(" + r->edge + ")";
    if (const auto* l = std::get_if<SetAtomList>(&e->node)) {
        std::string out = "{";
        for (size_t i = 0; i < l->items.size(); ++i) {
            if (i) out += ", ";
            if (const auto* v = std::get_if<SetAtomVertex>(&l->items[i]))
                out += v->name;
            else {
                const auto& f = std::get<SetAtomFamily>(l->items[i]);
                out += f.family + "[" + std::to_string(f.index) + "]";
            }
        }
        return out + "}";
    }
    const auto& b = std::get<SetBinary>(e->node);
    auto wrap = [&](const SetExprPtr& side) {
        std::string s = print_set_expr(side);
        if (std::holds_alternative<SetBinary>(side->node)) return "(" + s + ")";
        return s;
    };
    // left-associated chains of one operator print without parentheses
    std::string left = print_set_expr(b.left);
    if (const auto* lb = std::get_if<SetBinary>(&b.left->node); lb && lb->op != b.op)
        left = "(" + left + ")";
    return left + " " + b.op + " " + wrap(b.right);
}

inline std::string print_expr(const ExprPtr& e, const Ring& ring) {
    if (const auto* s = std::get_if<ExprScalar>(&e->node)) return ring.str(s->value);
    if (const auto* s = std::get_if<ExprGenS>(&e->node)) return "s(" + s->edge + ")";
    if (const auto* t = std::get_if<ExprGenT>(&e->node)) return "t(" + t->edge + ")";
    if (const auto* p = std::get_if<ExprGenP>(&e->node))
        return "p(" + print_set_expr(p->set) + ")";
    const auto& b = std::get<ExprBinary>(e->node);
    auto is_sum = [](const ExprPtr& x) {
        const auto* bin = std::get_if<ExprBinary>(&x->node);
        return bin && (bin->op == '+' || bin->op == '-');
    };
    auto is_binary = [](const ExprPtr& x) {
        return std::holds_alternative<ExprBinary>(x->node);
    };
    auto is_negative_scalar = [&](const ExprPtr& x) {
        const auto* s = std::get_if<ExprScalar>(&x->node);
        return s && s->value.num < 0;
    };
    if (b.op == '*') {
        std::string left = print_expr(b.left, ring);
        if (is_sum(b.left)) left = "(" + left + ")";
        std::string right = print_expr(b.right, ring);
        if (is_binary(b.right) || is_negative_scalar(b.right)) right = "(" + right + ")";
        return left + "*" + right;
    }
    std::string left = print_expr(b.left, ring);
    std::string right = print_expr(b.right, ring);
    if (is_sum(b.right) || is_negative_scalar(b.right)) right = "(" + right + ")";
    return left + " " + b.op + " " + right;
}

}  // namespace ulpa
