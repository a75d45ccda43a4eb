#ifndef LA_DERIVATION_HPP
#define LA_DERIVATION_HPP

#include <string>
#include <variant>
#include <vector>

#include "la/rules.hpp"
#include "la/semantics.hpp"

namespace la {

// Why a step is in the knowledge base. Rule steps reproduce exactly by
// re-running the named rule on the referenced contents.
struct PremiseJustification {};
struct RuleJustification {
    std::string rule;
    std::vector<int> inputs;  // step ids, all smaller than the step's own id
    RuleAssumption assumption = RuleAssumption::None;
};
struct NormalizationJustification {
    int input = 0;
};
using Justification =
    std::variant<PremiseJustification, RuleJustification, NormalizationJustification>;

struct DerivationStep {
    int id;  // 1..n, no gaps
    RuleValue content;
    Justification justification;
};

// Append-only list of premises and rule-derived conclusions. Single-writer;
// read-only sharing after construction is safe.
class KnowledgeBase {
public:
    // Returns the new step's id. Structural duplicates are permitted and get
    // fresh ids; render_chain flags them.
    int assert_premise(RuleValue content);

    // Runs the named rule on the referenced steps and appends the result.
    // Throws Error{"UnknownRule"}, Error{"MissingStep"}, or the rule's own
    // errors.
    int apply_rule(const std::string& rule, const std::vector<int>& input_ids);

    // Appends the double-negation normalization of a propositional step.
    // Throws Error{"MissingStep"} or Error{"UnsupportedNode"} for
    // categorical content.
    int normalize_step(int input_id);

    const std::vector<DerivationStep>& steps() const { return steps_; }
    const DerivationStep& step(int id) const;  // throws Error{"MissingStep"}
    bool empty() const { return steps_.empty(); }

    // Contents of Premise-justified steps only.
    std::vector<RuleValue> premises() const;

private:
    std::vector<DerivationStep> steps_;
};

struct HypothesisReport {
    EntailmentVerdict verdict = EntailmentVerdict::Unknown;
    // An existing step is structurally equal to the hypothesis after
    // double-negation normalization; implies verdict == Valid.
    bool derived_syntactically = false;
    bool oracle_used = false;
};

// Classifies a hypothesis against the knowledge base. The verdict is
// computed from Premise steps only (sound rules make derived steps
// redundant); the oracle is skipped when a syntactic derivation already
// exists. Propositional content goes through the truth-table oracle;
// categorical content through finite-model enumeration over domains
// 1..max_domain. Throws Error{"MixedLogic"} when the check would span both
// worlds, plus the oracles' own errors.
HypothesisReport check_hypothesis(const KnowledgeBase& kb, const RuleValue& hypothesis,
                                  int max_domain = 3);
HypothesisReport check_hypothesis(const KnowledgeBase& kb, const Formula& hypothesis,
                                  int max_domain = 3);

// "[id] <content>  (<justification>)".
std::string render_step(const DerivationStep& step);

// One line per step: "[id] <content>  (<justification>)". Duplicate contents
// are annotated with the first holder's id.
std::string render_chain(const KnowledgeBase& kb);

}  // namespace la

#endif
