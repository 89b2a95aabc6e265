#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "coin/label.hh"
#include "coin/syntax.hh"

namespace coin {

/// act(l): the current step performs l. en(l): l is enabled in the current state.
struct AtomDecl {
    enum class Kind { Act, En };
    Kind kind = Kind::Act;
    ComponentId sender = kOpen;
    std::string action;
    ComponentId receiver = kOpen;

    auto operator<=>(const AtomDecl &) const = default;
};

std::string format_atom(const AtomDecl &a);

enum class Op { True, False, Atom, Not, And, Or, Implies, Next, Until, Release, Eventually, Always };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable CI-LTL syntax tree. Unary operators use `lhs` only.
struct Formula {
    Op op = Op::True;
    AtomDecl atom; // Op::Atom only
    FormulaPtr lhs, rhs;
};

namespace ltl {
FormulaPtr truth();
FormulaPtr falsity();
FormulaPtr atom(AtomDecl a);
FormulaPtr act(ComponentId s, std::string action, ComponentId r);
FormulaPtr en(ComponentId s, std::string action, ComponentId r);
FormulaPtr unary(Op op, FormulaPtr f);
FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b);
inline FormulaPtr neg(FormulaPtr f) { return unary(Op::Not, std::move(f)); }
inline FormulaPtr X(FormulaPtr f) { return unary(Op::Next, std::move(f)); }
inline FormulaPtr F(FormulaPtr f) { return unary(Op::Eventually, std::move(f)); }
inline FormulaPtr G(FormulaPtr f) { return unary(Op::Always, std::move(f)); }
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(Op::And, std::move(a), std::move(b)); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(Op::Or, std::move(a), std::move(b)); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return binary(Op::Implies, std::move(a), std::move(b)); }
inline FormulaPtr U(FormulaPtr a, FormulaPtr b) { return binary(Op::Until, std::move(a), std::move(b)); }
inline FormulaPtr R(FormulaPtr a, FormulaPtr b) { return binary(Op::Release, std::move(a), std::move(b)); }
} // namespace ltl

bool equal(const Formula &a, const Formula &b);
inline bool equal(const FormulaPtr &a, const FormulaPtr &b) { return equal(*a, *b); }

/// Precedence, loosest first: -> (right), ||, &&, U R (left), prefix ! X F G.
/// Throws ParseError.
FormulaPtr parse_formula(std::string_view text);

/// Minimal-parenthesis text accepted back by parse_formula.
std::string format_formula(const Formula &f);
inline std::string format_formula(const FormulaPtr &f) { return format_formula(*f); }

/// Negation normal form: `->` eliminated, `!` only on atoms, F/G kept.
FormulaPtr nnf(const FormulaPtr &f);
/// nnf(!f).
FormulaPtr negate(const FormulaPtr &f);

std::size_t depth(const Formula &f);
bool uses_next(const Formula &f);
bool uses_act(const Formula &f);

namespace detail {
// act(e,IDENT,e) or en(e,IDENT,e); shared with the never-claim reader.
AtomDecl parse_atom(TokenStream &ts);
} // namespace detail

} // namespace coin
