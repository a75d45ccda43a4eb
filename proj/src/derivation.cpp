#include "la/derivation.hpp"

#include <algorithm>

#include "la/error.hpp"
#include "la/model.hpp"

namespace la {

namespace {

enum class World { Propositional, Quantified };

World world_of(const RuleValue& value) {
    if (const auto* f = std::get_if<Formula>(&value)) {
        return is_propositional(*f) ? World::Propositional : World::Quantified;
    }
    return World::Quantified;
}

// Categorical statements enter the finite-model oracle through their
// quantified reading, negated when asserted false.
Formula quantified_reading(const RuleValue& value) {
    if (const auto* f = std::get_if<Formula>(&value)) return *f;
    const auto& s = std::get<CategoricalStatement>(value);
    Formula q = to_quantified(s);
    return s.truth ? q : neg(q);
}

RuleValue normalized(const RuleValue& value) {
    if (const auto* f = std::get_if<Formula>(&value)) {
        return normalize_double_negation(*f);
    }
    return value;
}

std::string justification_text(const Justification& j) {
    if (std::holds_alternative<PremiseJustification>(j)) return "Premise";
    if (const auto* rule = std::get_if<RuleJustification>(&j)) {
        std::string out = rule->rule + " of ";
        for (std::size_t i = 0; i < rule->inputs.size(); ++i) {
            if (i > 0) out += ", ";
            out += std::to_string(rule->inputs[i]);
        }
        return out;
    }
    return "Normalization of " +
           std::to_string(std::get<NormalizationJustification>(j).input);
}

}  // namespace

int KnowledgeBase::assert_premise(RuleValue content) {
    const int id = static_cast<int>(steps_.size()) + 1;
    steps_.push_back({id, std::move(content), PremiseJustification{}});
    return id;
}

const DerivationStep& KnowledgeBase::step(int id) const {
    if (id < 1 || id > static_cast<int>(steps_.size())) {
        throw Error("MissingStep", "no step with id " + std::to_string(id));
    }
    return steps_[static_cast<std::size_t>(id) - 1];
}

int KnowledgeBase::apply_rule(const std::string& rule,
                              const std::vector<int>& input_ids) {
    std::vector<RuleValue> inputs;
    inputs.reserve(input_ids.size());
    for (int id : input_ids) inputs.push_back(step(id).content);
    RuleApplication app = la::apply_rule(rule, inputs);
    const int id = static_cast<int>(steps_.size()) + 1;
    steps_.push_back(
        {id, std::move(app.output), RuleJustification{rule, input_ids, app.assumption}});
    return id;
}

int KnowledgeBase::normalize_step(int input_id) {
    const DerivationStep& source = step(input_id);
    const auto* f = std::get_if<Formula>(&source.content);
    if (!f) {
        throw Error("UnsupportedNode",
                    "normalization applies to formulas, not categorical statements");
    }
    const int id = static_cast<int>(steps_.size()) + 1;
    steps_.push_back(
        {id, normalize_double_negation(*f), NormalizationJustification{input_id}});
    return id;
}

std::vector<RuleValue> KnowledgeBase::premises() const {
    std::vector<RuleValue> out;
    for (const DerivationStep& s : steps_) {
        if (std::holds_alternative<PremiseJustification>(s.justification)) {
            out.push_back(s.content);
        }
    }
    return out;
}

HypothesisReport check_hypothesis(const KnowledgeBase& kb, const RuleValue& hypothesis,
                                  int max_domain) {
    HypothesisReport report;

    const RuleValue target = normalized(hypothesis);
    for (const DerivationStep& s : kb.steps()) {
        if (rule_values_equal(normalized(s.content), target)) {
            report.derived_syntactically = true;
            report.verdict = EntailmentVerdict::Valid;
            return report;
        }
    }

    const std::vector<RuleValue> premises = kb.premises();
    World world = world_of(hypothesis);
    for (const RuleValue& p : premises) {
        if (world_of(p) != world) {
            throw Error("MixedLogic",
                        "knowledge base mixes propositional and quantified content");
        }
    }

    report.oracle_used = true;
    if (world == World::Propositional) {
        std::vector<Formula> formulas;
        formulas.reserve(premises.size());
        for (const RuleValue& p : premises) formulas.push_back(std::get<Formula>(p));
        report.verdict = classify_entailment(formulas, std::get<Formula>(hypothesis));
        return report;
    }

    std::vector<Formula> antecedents;
    antecedents.reserve(premises.size());
    for (const RuleValue& p : premises) antecedents.push_back(quantified_reading(p));
    const Formula goal = quantified_reading(hypothesis);

    std::vector<std::string> predicates;
    auto merge = [&predicates](const Formula& f) {
        for (const std::string& name : atoms(f)) {
            if (std::find(predicates.begin(), predicates.end(), name) ==
                predicates.end()) {
                predicates.push_back(name);
            }
        }
    };
    for (const Formula& f : antecedents) merge(f);
    merge(goal);
    if (predicates.size() > 6) {
        throw Error("TooManyAtoms",
                    std::to_string(predicates.size()) +
                        " predicates exceed the finite-model enumeration cap of 6");
    }

    bool any_premise_model = false;
    bool always = true;
    bool never = true;
    for (const FiniteModel& m : enumerate_models(max_domain, predicates, false, "")) {
        const bool sat = std::all_of(
            antecedents.begin(), antecedents.end(),
            [&m](const Formula& f) { return eval_finite_model(f, m); });
        if (!sat) continue;
        any_premise_model = true;
        if (eval_finite_model(goal, m)) {
            never = false;
        } else {
            always = false;
        }
    }
    if (!any_premise_model || always) {
        report.verdict = EntailmentVerdict::Valid;
    } else if (never) {
        report.verdict = EntailmentVerdict::Contradicted;
    } else {
        report.verdict = EntailmentVerdict::Unknown;
    }
    return report;
}

HypothesisReport check_hypothesis(const KnowledgeBase& kb, const Formula& hypothesis,
                                  int max_domain) {
    return check_hypothesis(kb, RuleValue{hypothesis}, max_domain);
}

std::string render_step(const DerivationStep& step) {
    return '[' + std::to_string(step.id) + "] " + serialize(step.content) + "  (" +
           justification_text(step.justification) + ')';
}

std::string render_chain(const KnowledgeBase& kb) {
    std::string out;
    const auto& steps = kb.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        out += '[' + std::to_string(steps[i].id) + "] " + serialize(steps[i].content) +
               "  (" + justification_text(steps[i].justification);
        for (std::size_t j = 0; j < i; ++j) {
            if (rule_values_equal(steps[j].content, steps[i].content)) {
                out += "; duplicate of " + std::to_string(steps[j].id);
                break;
            }
        }
        out += ")\n";
    }
    return out;
}

}  // namespace la
