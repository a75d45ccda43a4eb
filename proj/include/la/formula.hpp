#ifndef LA_FORMULA_HPP
#define LA_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace la {

enum class Kind : std::uint8_t {
    Var,
    Atom,
    Pred,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Forall,
    Exists,
};

// Immutable formula AST with value semantics (nodes are shared, never
// mutated). Nested And-in-And / Or-in-Or is flattened at construction, so
// structural equality compares flattened forms directly.
class Formula {
public:
    Kind kind() const { return node_->kind; }

    // Atom/Var/Pred name.
    const std::string& name() const { return node_->name; }
    // Pred argument variable, or the bound variable of a quantifier.
    const std::string& var() const { return node_->var; }
    const std::vector<Formula>& parts() const { return node_->parts; }

    const Formula& child(std::size_t i = 0) const { return node_->parts[i]; }
    const Formula& lhs() const { return node_->parts[0]; }
    const Formula& rhs() const { return node_->parts[1]; }
    const Formula& body() const { return node_->parts[0]; }

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

    friend Formula var(std::string name);
    friend Formula atom(std::string name);
    friend Formula pred(std::string name, std::string variable);
    friend Formula neg(Formula inner);
    friend Formula conj(std::vector<Formula> parts);
    friend Formula disj(std::vector<Formula> parts);
    friend Formula implies(Formula antecedent, Formula consequent);
    friend Formula equiv(Formula left, Formula right);
    friend Formula forall(std::string variable, Formula body);
    friend Formula exists(std::string variable, Formula body);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::string var;
        std::vector<Formula> parts;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Kind kind, std::string name, std::string var,
                        std::vector<Formula> parts);

    std::shared_ptr<const Node> node_;
};

// Factories; the only way to build formulas. They validate identifiers
// (nonempty, [A-Za-z_][A-Za-z0-9_]*, not a reserved word) and arities, and
// throw Error{"InvalidFormula"} on violation.
Formula var(std::string name);
Formula atom(std::string name);
Formula pred(std::string name, std::string variable);
Formula neg(Formula inner);
Formula conj(std::vector<Formula> parts);
Formula disj(std::vector<Formula> parts);
Formula implies(Formula antecedent, Formula consequent);
Formula equiv(Formula left, Formula right);
Formula forall(std::string variable, Formula body);
Formula exists(std::string variable, Formula body);

bool valid_identifier(const std::string& text);

// Atom names in first-occurrence, left-to-right order, deduplicated.
// For quantified formulas this includes Pred names.
std::vector<std::string> atoms(const Formula& f);

// No Var/Pred/Forall/Exists nodes anywhere.
bool is_propositional(const Formula& f);

// Every Var occurrence and Pred argument is bound by an enclosing quantifier.
bool is_closed(const Formula& f);

// Rewrites every Not(Not(x)) subterm to x, to fixpoint. No other rewriting.
Formula normalize_double_negation(const Formula& f);

enum class Syntax { Operator, Constructor };

// Deterministic rendering; round-trips through the corresponding parser.
// Operator syntax parenthesizes minimally under the parser's precedence.
std::string serialize(const Formula& f, Syntax syntax = Syntax::Operator);

}  // namespace la

#endif
