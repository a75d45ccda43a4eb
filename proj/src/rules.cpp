#include "la/rules.hpp"

#include <algorithm>

#include "la/error.hpp"

namespace la {

std::string serialize(const RuleValue& value) {
    if (const auto* f = std::get_if<Formula>(&value)) return serialize(*f);
    return serialize(std::get<CategoricalStatement>(value));
}

bool rule_values_equal(const RuleValue& a, const RuleValue& b) {
    if (a.index() != b.index()) return false;
    if (const auto* f = std::get_if<Formula>(&a)) return *f == std::get<Formula>(b);
    return std::get<CategoricalStatement>(a) == std::get<CategoricalStatement>(b);
}

Formula contrapositive(const Formula& f) {
    if (f.kind() != Kind::Implies) {
        throw Error("NotAnImplication", "Contrapositive expects an implication, got " +
                                            serialize(f));
    }
    return implies(neg(f.rhs()), neg(f.lhs()));
}

Formula transitive(const Formula& f, const Formula& g) {
    if (f.kind() != Kind::Implies || g.kind() != Kind::Implies) {
        throw Error("NotAnImplication", "Transitive expects two implications");
    }
    if (normalize_double_negation(f.rhs()) != normalize_double_negation(g.lhs())) {
        throw Error("MiddleTermMismatch", "no common middle term between " +
                                              serialize(f) + " and " + serialize(g));
    }
    return implies(f.lhs(), g.rhs());
}

Formula de_morgans(const Formula& f) {
    auto negate_all = [](const std::vector<Formula>& parts) {
        std::vector<Formula> out;
        out.reserve(parts.size());
        for (const Formula& p : parts) out.push_back(neg(p));
        return out;
    };
    if (f.kind() == Kind::Not &&
        (f.child().kind() == Kind::And || f.child().kind() == Kind::Or)) {
        // Outward negation pushed in: ~(x & y) -> ~x | ~y and dually.
        return f.child().kind() == Kind::And ? disj(negate_all(f.child().parts()))
                                             : conj(negate_all(f.child().parts()));
    }
    if (f.kind() == Kind::And || f.kind() == Kind::Or) {
        const bool all_negated =
            std::all_of(f.parts().begin(), f.parts().end(),
                        [](const Formula& p) { return p.kind() == Kind::Not; });
        if (all_negated) {
            // Inward negations pulled out: ~x & ~y -> ~(x | y) and dually.
            std::vector<Formula> inner;
            inner.reserve(f.parts().size());
            for (const Formula& p : f.parts()) inner.push_back(p.child());
            return f.kind() == Kind::And ? neg(disj(std::move(inner)))
                                         : neg(conj(std::move(inner)));
        }
    }
    throw Error("NotDeMorganShape",
                "De_Morgans expects a negated conjunction/disjunction or a "
                "conjunction/disjunction of negations, got " +
                    serialize(f));
}

namespace {

bool universal(CategoricalForm form) {
    return form == CategoricalForm::A || form == CategoricalForm::E;
}

[[noreturn]] void wrong_form(const char* rule, const CategoricalStatement& s) {
    throw Error("WrongForm", std::string(rule) + " does not apply to form " +
                                 std::string(1, static_cast<char>(s.form)));
}

}  // namespace

CategoricalStatement contradictory(const CategoricalStatement& s) {
    CategoricalForm flipped;
    switch (s.form) {
        case CategoricalForm::A: flipped = CategoricalForm::O; break;
        case CategoricalForm::O: flipped = CategoricalForm::A; break;
        case CategoricalForm::E: flipped = CategoricalForm::I; break;
        case CategoricalForm::I: flipped = CategoricalForm::E; break;
        default: wrong_form("Contradictory", s);
    }
    return {flipped, s.subject, s.predicate, !s.truth};
}

CategoricalStatement contrary(const CategoricalStatement& s) {
    if (!universal(s.form)) wrong_form("Contrary", s);
    if (!s.truth) {
        throw Error("Undetermined", "contraries may both be false");
    }
    const CategoricalForm flipped =
        s.form == CategoricalForm::A ? CategoricalForm::E : CategoricalForm::A;
    return {flipped, s.subject, s.predicate, false};
}

CategoricalStatement subcontrary(const CategoricalStatement& s) {
    if (universal(s.form)) wrong_form("Subcontrary", s);
    if (s.truth) {
        throw Error("Undetermined", "subcontraries may both be true");
    }
    const CategoricalForm flipped =
        s.form == CategoricalForm::I ? CategoricalForm::O : CategoricalForm::I;
    return {flipped, s.subject, s.predicate, true};
}

CategoricalStatement subalternation_forward(const CategoricalStatement& s) {
    if (!universal(s.form)) wrong_form("Subalternation_forward", s);
    if (!s.truth) {
        throw Error("Undetermined", "universal falsity does not descend");
    }
    const CategoricalForm particular =
        s.form == CategoricalForm::A ? CategoricalForm::I : CategoricalForm::O;
    return {particular, s.subject, s.predicate, true};
}

CategoricalStatement subalternation_backward(const CategoricalStatement& s) {
    if (universal(s.form)) wrong_form("Subalternation_backward", s);
    if (s.truth) {
        throw Error("Undetermined", "particular truth does not ascend");
    }
    const CategoricalForm univ =
        s.form == CategoricalForm::I ? CategoricalForm::A : CategoricalForm::E;
    return {univ, s.subject, s.predicate, false};
}

const std::vector<RuleInfo>& rule_registry() {
    static const std::vector<RuleInfo> registry = {
        {"Contrapositive", 1, false, RuleAssumption::None},
        {"Transitive", 2, false, RuleAssumption::None},
        {"De_Morgans", 1, false, RuleAssumption::None},
        {"Contradictory", 1, true, RuleAssumption::None},
        {"Contrary", 1, true, RuleAssumption::ExistentialImport},
        {"Subcontrary", 1, true, RuleAssumption::ExistentialImport},
        {"Subalternation_forward", 1, true, RuleAssumption::ExistentialImport},
        {"Subalternation_backward", 1, true, RuleAssumption::ExistentialImport},
    };
    return registry;
}

std::optional<RuleInfo> find_rule(const std::string& name) {
    for (const RuleInfo& info : rule_registry()) {
        if (info.name == name) return info;
    }
    return std::nullopt;
}

namespace {

const Formula& as_formula(const RuleValue& value, const char* rule,
                          const char* error_code) {
    if (const auto* f = std::get_if<Formula>(&value)) return *f;
    throw Error(error_code,
                std::string(rule) + " applies to formulas, not categorical statements");
}

const CategoricalStatement& as_statement(const RuleValue& value, const char* rule) {
    if (const auto* s = std::get_if<CategoricalStatement>(&value)) return *s;
    throw Error("WrongForm",
                std::string(rule) + " applies to categorical statements, not formulas");
}

}  // namespace

RuleApplication apply_rule(const std::string& name,
                           const std::vector<RuleValue>& inputs) {
    const auto info = find_rule(name);
    if (!info) {
        throw Error("UnknownRule", "no rule named '" + name + "'");
    }
    if (inputs.size() != info->arity) {
        throw Error("ArityMismatch", name + " expects " + std::to_string(info->arity) +
                                         " input(s), got " +
                                         std::to_string(inputs.size()));
    }
    auto run = [&]() -> RuleValue {
        if (name == "Contrapositive") {
            return contrapositive(as_formula(inputs[0], "Contrapositive", "NotAnImplication"));
        }
        if (name == "Transitive") {
            return transitive(as_formula(inputs[0], "Transitive", "NotAnImplication"),
                              as_formula(inputs[1], "Transitive", "NotAnImplication"));
        }
        if (name == "De_Morgans") {
            return de_morgans(as_formula(inputs[0], "De_Morgans", "NotDeMorganShape"));
        }
        if (name == "Contradictory") {
            return contradictory(as_statement(inputs[0], "Contradictory"));
        }
        if (name == "Contrary") {
            return contrary(as_statement(inputs[0], "Contrary"));
        }
        if (name == "Subcontrary") {
            return subcontrary(as_statement(inputs[0], "Subcontrary"));
        }
        if (name == "Subalternation_forward") {
            return subalternation_forward(as_statement(inputs[0], "Subalternation_forward"));
        }
        return subalternation_backward(as_statement(inputs[0], "Subalternation_backward"));
    };
    return RuleApplication{name, inputs, run(), info->assumption};
}

}  // namespace la
