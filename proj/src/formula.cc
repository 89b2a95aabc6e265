#include "coin/formula.hh"

#include <stdexcept>

namespace coin {

namespace ltl {

FormulaPtr truth() {
    static const FormulaPtr t = std::make_shared<Formula>(Formula{Op::True, {}, nullptr, nullptr});
    return t;
}

FormulaPtr falsity() {
    static const FormulaPtr f = std::make_shared<Formula>(Formula{Op::False, {}, nullptr, nullptr});
    return f;
}

FormulaPtr atom(AtomDecl a) { return std::make_shared<Formula>(Formula{Op::Atom, std::move(a), nullptr, nullptr}); }

FormulaPtr act(ComponentId s, std::string action, ComponentId r) {
    return atom({AtomDecl::Kind::Act, s, std::move(action), r});
}

FormulaPtr en(ComponentId s, std::string action, ComponentId r) {
    return atom({AtomDecl::Kind::En, s, std::move(action), r});
}

FormulaPtr unary(Op op, FormulaPtr f) { return std::make_shared<Formula>(Formula{op, {}, std::move(f), nullptr}); }

FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{op, {}, std::move(a), std::move(b)});
}

} // namespace ltl

namespace {

bool is_unary(Op op) { return op == Op::Not || op == Op::Next || op == Op::Eventually || op == Op::Always; }

int precedence(Op op) {
    switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always: return 5;
    default: return 6;
    }
}

const char *symbol(Op op) {
    switch (op) {
    case Op::Implies: return "->";
    case Op::Or: return "||";
    case Op::And: return "&&";
    case Op::Until: return "U";
    case Op::Release: return "R";
    case Op::Not: return "!";
    case Op::Next: return "X";
    case Op::Eventually: return "F";
    case Op::Always: return "G";
    default: return "";
    }
}

std::string endpoint(ComponentId c) { return c == kOpen ? "-" : std::to_string(c); }

[[noreturn]] void malformed(TokenStream &ts, const std::string &what) {
    ts.fail("malformed label atom: " + what + ", found " + describe(ts.peek()));
}

ComponentId atom_endpoint(TokenStream &ts) {
    if (ts.accept("-"))
        return kOpen;
    if (ts.peek().kind != TokenKind::Int)
        malformed(ts, "expected component id or '-'");
    const Token &t = ts.next();
    if (t.value < 1 || t.value > kMaxComponentId)
        throw ParseError(t.pos, "malformed label atom: component id out of range");
    return static_cast<ComponentId>(t.value);
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : ts_(text) {}

    FormulaPtr parse() {
        auto f = implication();
        if (!ts_.at_end()) {
            if (ts_.peek().is(")"))
                ts_.fail("unbalanced parenthesis");
            ts_.unexpected("end of formula");
        }
        return f;
    }

private:
    FormulaPtr implication() {
        auto lhs = disjunction();
        if (ts_.accept("->"))
            return ltl::implies(lhs, implication());
        return lhs;
    }

    FormulaPtr disjunction() {
        auto f = conjunction();
        while (ts_.accept("||"))
            f = ltl::disj(f, conjunction());
        return f;
    }

    FormulaPtr conjunction() {
        auto f = temporal();
        while (ts_.accept("&&"))
            f = ltl::conj(f, temporal());
        return f;
    }

    FormulaPtr temporal() {
        auto f = prefix();
        for (;;) {
            if (ts_.accept_word("U"))
                f = ltl::U(f, prefix());
            else if (ts_.accept_word("R"))
                f = ltl::R(f, prefix());
            else
                return f;
        }
    }

    FormulaPtr prefix() {
        if (ts_.accept("!"))
            return ltl::neg(prefix());
        if (ts_.accept_word("X"))
            return ltl::X(prefix());
        if (ts_.accept_word("F"))
            return ltl::F(prefix());
        if (ts_.accept_word("G"))
            return ltl::G(prefix());
        return primary();
    }

    FormulaPtr primary() {
        if (ts_.accept("(")) {
            auto f = implication();
            if (!ts_.accept(")"))
                ts_.fail("unbalanced parenthesis");
            return f;
        }
        if (ts_.accept_word("true"))
            return ltl::truth();
        if (ts_.accept_word("false"))
            return ltl::falsity();
        if (ts_.peek().is_word("act") || ts_.peek().is_word("en"))
            return ltl::atom(detail::parse_atom(ts_));
        ts_.unexpected("formula");
    }

    TokenStream ts_;
};

void print(const Formula &f, std::string &out);

void print_child(const Formula &child, bool parens, std::string &out) {
    if (parens)
        out += '(';
    print(child, out);
    if (parens)
        out += ')';
}

void print(const Formula &f, std::string &out) {
    switch (f.op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += format_atom(f.atom); return;
    default: break;
    }
    int p = precedence(f.op);
    if (is_unary(f.op)) {
        out += symbol(f.op);
        if (f.op != Op::Not)
            out += ' ';
        print_child(*f.lhs, precedence(f.lhs->op) < p, out);
        return;
    }
    bool right_assoc = f.op == Op::Implies;
    int lp = precedence(f.lhs->op), rp = precedence(f.rhs->op);
    print_child(*f.lhs, lp < p || (right_assoc && lp == p), out);
    out += ' ';
    out += symbol(f.op);
    out += ' ';
    print_child(*f.rhs, rp < p || (!right_assoc && rp == p), out);
}

FormulaPtr to_nnf(const FormulaPtr &f, bool negated) {
    using namespace ltl;
    switch (f->op) {
    case Op::True: return negated ? falsity() : truth();
    case Op::False: return negated ? truth() : falsity();
    case Op::Atom: return negated ? neg(f) : f;
    case Op::Not: return to_nnf(f->lhs, !negated);
    case Op::And:
        return binary(negated ? Op::Or : Op::And, to_nnf(f->lhs, negated), to_nnf(f->rhs, negated));
    case Op::Or:
        return binary(negated ? Op::And : Op::Or, to_nnf(f->lhs, negated), to_nnf(f->rhs, negated));
    case Op::Implies:
        // a -> b == !a || b
        return negated ? conj(to_nnf(f->lhs, false), to_nnf(f->rhs, true))
                       : disj(to_nnf(f->lhs, true), to_nnf(f->rhs, false));
    case Op::Next: return X(to_nnf(f->lhs, negated));
    case Op::Until:
        return binary(negated ? Op::Release : Op::Until, to_nnf(f->lhs, negated), to_nnf(f->rhs, negated));
    case Op::Release:
        return binary(negated ? Op::Until : Op::Release, to_nnf(f->lhs, negated), to_nnf(f->rhs, negated));
    case Op::Eventually: return unary(negated ? Op::Always : Op::Eventually, to_nnf(f->lhs, negated));
    case Op::Always: return unary(negated ? Op::Eventually : Op::Always, to_nnf(f->lhs, negated));
    }
    throw std::logic_error("unknown operator");
}

} // namespace

namespace detail {

AtomDecl parse_atom(TokenStream &ts) {
    AtomDecl a;
    if (ts.accept_word("act"))
        a.kind = AtomDecl::Kind::Act;
    else if (ts.accept_word("en"))
        a.kind = AtomDecl::Kind::En;
    else
        ts.unexpected("'act' or 'en'");
    SourcePos pos = ts.peek().pos;
    if (!ts.accept("("))
        malformed(ts, "expected '('");
    a.sender = atom_endpoint(ts);
    if (!ts.accept(","))
        malformed(ts, "expected ','");
    if (ts.peek().kind != TokenKind::Ident)
        malformed(ts, "expected action name");
    a.action = ts.next().text;
    if (!ts.accept(","))
        malformed(ts, "expected ','");
    a.receiver = atom_endpoint(ts);
    if (!ts.accept(")"))
        malformed(ts, "expected ')'");
    if (a.sender == kOpen && a.receiver == kOpen)
        throw ParseError(pos, "malformed label atom: two open endpoints");
    return a;
}

} // namespace detail

std::string format_atom(const AtomDecl &a) {
    return std::string(a.kind == AtomDecl::Kind::Act ? "act(" : "en(") + endpoint(a.sender) + "," + a.action + "," +
           endpoint(a.receiver) + ")";
}

bool equal(const Formula &a, const Formula &b) {
    if (a.op != b.op)
        return false;
    if (a.op == Op::Atom)
        return a.atom == b.atom;
    if (a.lhs && !equal(*a.lhs, *b.lhs))
        return false;
    return !a.rhs || equal(*a.rhs, *b.rhs);
}

FormulaPtr parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string format_formula(const Formula &f) {
    std::string out;
    print(f, out);
    return out;
}

FormulaPtr nnf(const FormulaPtr &f) { return to_nnf(f, false); }
FormulaPtr negate(const FormulaPtr &f) { return to_nnf(f, true); }

std::size_t depth(const Formula &f) {
    std::size_t d = 0;
    if (f.lhs)
        d = std::max(d, depth(*f.lhs));
    if (f.rhs)
        d = std::max(d, depth(*f.rhs));
    return f.lhs ? d + 1 : 0;
}

bool uses_next(const Formula &f) {
    return f.op == Op::Next || (f.lhs && uses_next(*f.lhs)) || (f.rhs && uses_next(*f.rhs));
}

bool uses_act(const Formula &f) {
    if (f.op == Op::Atom)
        return f.atom.kind == AtomDecl::Kind::Act;
    return (f.lhs && uses_act(*f.lhs)) || (f.rhs && uses_act(*f.rhs));
}

} // namespace coin
