#ifndef LA_RULES_HPP
#define LA_RULES_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "la/categorical.hpp"
#include "la/formula.hpp"

namespace la {

// A step input or output: propositional formula or categorical statement.
using RuleValue = std::variant<Formula, CategoricalStatement>;

std::string serialize(const RuleValue& value);
bool rule_values_equal(const RuleValue& a, const RuleValue& b);

enum class RuleAssumption { None, ExistentialImport };

// One certified rule application: output is semantically entailed by the
// inputs (under the stated assumption).
struct RuleApplication {
    std::string rule;
    std::vector<RuleValue> inputs;
    RuleValue output;
    RuleAssumption assumption = RuleAssumption::None;
};

// Propositional rules. Errors carry the codes named here.
//
// contrapositive: Implies(a, b) -> Implies(Not(b), Not(a)). Inner negations
// are left untouched; normalization is a separate explicit step.
// Throws Error{"NotAnImplication"}.
Formula contrapositive(const Formula& f);

// transitive: from Implies(a, b) and Implies(b', c) where b and b' are
// structurally equal after double-negation normalization, derive
// Implies(a, c). Throws Error{"NotAnImplication"} or
// Error{"MiddleTermMismatch"}.
Formula transitive(const Formula& f, const Formula& g);

// de_morgans: Not(And(..)) <-> Or of negations, Not(Or(..)) <-> And of
// negations, in whichever direction the input shape admits.
// Throws Error{"NotDeMorganShape"}.
Formula de_morgans(const Formula& f);

// Square-of-opposition rules. Contradictory holds unconditionally; the
// other three are valid only under existential import on the subject term,
// recorded in the RuleApplication's assumption.
//
// contradictory: A<->O, E<->I with negated truth. Total.
CategoricalStatement contradictory(const CategoricalStatement& s);

// contrary: (A,true)->(E,false), (E,true)->(A,false).
// Throws Error{"WrongForm"} for I/O and Error{"Undetermined"} when the
// input is asserted false (contraries may both be false).
CategoricalStatement contrary(const CategoricalStatement& s);

// subcontrary: (I,false)->(O,true), (O,false)->(I,true).
// Throws Error{"WrongForm"} for A/E and Error{"Undetermined"} when the
// input is asserted true (subcontraries may both be true).
CategoricalStatement subcontrary(const CategoricalStatement& s);

// subalternation_forward: (A,true)->(I,true), (E,true)->(O,true).
// Throws Error{"WrongForm"} for I/O and Error{"Undetermined"} when the
// input is asserted false (universal falsity does not descend).
CategoricalStatement subalternation_forward(const CategoricalStatement& s);

// subalternation_backward: (I,false)->(A,false), (O,false)->(E,false).
// Throws Error{"WrongForm"} for A/E and Error{"Undetermined"} when the
// input is asserted true (particular truth does not ascend).
CategoricalStatement subalternation_backward(const CategoricalStatement& s);

// Registry keyed by the wire identifiers: Contrapositive, Transitive,
// De_Morgans, Contradictory, Contrary, Subcontrary, Subalternation_forward,
// Subalternation_backward.
struct RuleInfo {
    std::string name;
    std::size_t arity;
    bool categorical;
    RuleAssumption assumption;
};

const std::vector<RuleInfo>& rule_registry();
std::optional<RuleInfo> find_rule(const std::string& name);

// Dispatches by wire name. Throws Error{"UnknownRule"}, Error{"ArityMismatch"},
// or whatever the rule itself throws; passing a categorical statement to a
// propositional rule fails with that rule's shape error, and a formula to a
// categorical rule fails with Error{"WrongForm"}.
RuleApplication apply_rule(const std::string& name,
                           const std::vector<RuleValue>& inputs);

}  // namespace la

#endif
