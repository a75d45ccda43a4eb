#include "la/semantics.hpp"

#include <algorithm>

#include "la/error.hpp"
#include "la/truth_table.hpp"

namespace la {

namespace {

std::vector<std::string> combined_atoms(const std::vector<Formula>& premises,
                                        const Formula& hypothesis) {
    std::vector<std::string> order;
    auto merge = [&order](const Formula& f) {
        for (const std::string& a : atoms(f)) {
            if (std::find(order.begin(), order.end(), a) == order.end()) {
                order.push_back(a);
            }
        }
    };
    for (const Formula& p : premises) merge(p);
    merge(hypothesis);
    if (order.size() > kMaxEntailmentAtoms) {
        throw Error("TooManyAtoms", std::to_string(order.size()) +
                                        " atoms exceed the enumeration cap of " +
                                        std::to_string(kMaxEntailmentAtoms));
    }
    return order;
}

EntailmentVerdict verdict_from(const EntailmentCounts& counts) {
    // Unsatisfiable premises entail everything, so Valid is checked first.
    if (counts.hypothesis_true == counts.premise_sat) return EntailmentVerdict::Valid;
    if (counts.hypothesis_true == 0) return EntailmentVerdict::Contradicted;
    return EntailmentVerdict::Unknown;
}

}  // namespace

bool evaluate(const Formula& f, const Valuation& v) {
    switch (f.kind()) {
        case Kind::Atom: {
            auto it = v.find(f.name());
            if (it == v.end()) {
                throw Error("UnboundAtom", "atom '" + f.name() + "' has no assignment");
            }
            return it->second;
        }
        case Kind::Not:
            return !evaluate(f.child(), v);
        case Kind::And:
            return std::all_of(f.parts().begin(), f.parts().end(),
                               [&v](const Formula& p) { return evaluate(p, v); });
        case Kind::Or:
            return std::any_of(f.parts().begin(), f.parts().end(),
                               [&v](const Formula& p) { return evaluate(p, v); });
        case Kind::Implies:
            return !evaluate(f.lhs(), v) || evaluate(f.rhs(), v);
        case Kind::Equiv:
            return evaluate(f.lhs(), v) == evaluate(f.rhs(), v);
        case Kind::Var:
        case Kind::Pred:
        case Kind::Forall:
        case Kind::Exists:
            throw Error("UnsupportedNode",
                        "evaluate is defined for propositional formulas only");
    }
    return false;
}

std::string to_string(EntailmentVerdict v) {
    switch (v) {
        case EntailmentVerdict::Valid: return "VALID";
        case EntailmentVerdict::Contradicted: return "CONTRADICTED";
        case EntailmentVerdict::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

EntailmentVerdict classify_entailment(const std::vector<Formula>& premises,
                                      const Formula& hypothesis) {
    const std::vector<std::string> order = combined_atoms(premises, hypothesis);
    std::vector<CompiledFormula> compiled;
    compiled.reserve(premises.size());
    for (const Formula& p : premises) compiled.push_back(compile(p, order));
    const CompiledFormula hyp = compile(hypothesis, order);
    return verdict_from(
        scan_entailment(compiled, hyp, static_cast<std::uint32_t>(order.size())));
}

bool equivalent(const Formula& f, const Formula& g) {
    const std::vector<std::string> order = combined_atoms({f}, g);
    const auto n = static_cast<std::uint32_t>(order.size());
    const std::uint64_t total = n >= 6 ? (1ull << (n - 6)) * 64 : 1ull << n;
    return scan_agreement(compile(f, order), compile(g, order), n) == total;
}

namespace reference {

namespace {

// Bit i of the index is atom i's assignment; no valuation map is built so
// the walk stays honest-but-cheap for the test sweeps.
bool eval_indexed(const Formula& f, const std::vector<std::string>& order,
                  std::uint64_t index) {
    switch (f.kind()) {
        case Kind::Atom: {
            auto it = std::find(order.begin(), order.end(), f.name());
            if (it == order.end()) {
                throw Error("UnboundAtom", "atom '" + f.name() + "' has no assignment");
            }
            return (index >> (it - order.begin())) & 1;
        }
        case Kind::Not:
            return !eval_indexed(f.child(), order, index);
        case Kind::And:
            return std::all_of(
                f.parts().begin(), f.parts().end(),
                [&](const Formula& p) { return eval_indexed(p, order, index); });
        case Kind::Or:
            return std::any_of(
                f.parts().begin(), f.parts().end(),
                [&](const Formula& p) { return eval_indexed(p, order, index); });
        case Kind::Implies:
            return !eval_indexed(f.lhs(), order, index) ||
                   eval_indexed(f.rhs(), order, index);
        case Kind::Equiv:
            return eval_indexed(f.lhs(), order, index) ==
                   eval_indexed(f.rhs(), order, index);
        default:
            throw Error("UnsupportedNode",
                        "truth tables are defined for propositional formulas only");
    }
}

}  // namespace

EntailmentVerdict classify_entailment(const std::vector<Formula>& premises,
                                      const Formula& hypothesis) {
    const std::vector<std::string> order = combined_atoms(premises, hypothesis);
    const std::uint64_t total = 1ull << order.size();
    EntailmentCounts counts;
    for (std::uint64_t v = 0; v < total; ++v) {
        const bool sat =
            std::all_of(premises.begin(), premises.end(), [&](const Formula& p) {
                return eval_indexed(p, order, v);
            });
        if (!sat) continue;
        ++counts.premise_sat;
        if (eval_indexed(hypothesis, order, v)) ++counts.hypothesis_true;
    }
    return verdict_from(counts);
}

bool equivalent(const Formula& f, const Formula& g) {
    const std::vector<std::string> order = combined_atoms({f}, g);
    const std::uint64_t total = 1ull << order.size();
    for (std::uint64_t v = 0; v < total; ++v) {
        if (eval_indexed(f, order, v) != eval_indexed(g, order, v)) return false;
    }
    return true;
}

}  // namespace reference

}  // namespace la
