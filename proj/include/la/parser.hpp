#ifndef LA_PARSER_HPP
#define LA_PARSER_HPP

#include <string>

#include "la/error.hpp"
#include "la/formula.hpp"

namespace la {

// Operator syntax. Precedence ~ > & > | > -> > <->, with -> right-associative
// and & | <-> left-associative (& and | flatten to n-ary). "forall x. body"
// and "exists x. body" bind to the end of the expression. Name(x) is a
// monadic predicate application, a bare Name is an Atom. The Unicode glyphs
// "→ ∧ ∨ ¬ ↔ ∀ ∃" alias "-> & | ~ <-> forall exists".
Formula parse_operator(const std::string& text);

// Constructor syntax, e.g. "Implies(Not(Atom(P)), Atom(Q))". Accepts the
// constructor names Var, Atom, Pred, Not, And, Or, Implies, Equiv, Forall,
// Exists with arbitrary interior whitespace and newlines.
Formula parse_constructor(const std::string& text);

// Picks the syntax by inspecting the head token: a known constructor name
// followed by '(' selects constructor syntax, anything else operator syntax.
Formula parse_formula(const std::string& text);

}  // namespace la

#endif
