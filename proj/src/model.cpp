#include "la/model.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "la/error.hpp"

namespace la {

namespace {

using Scope = std::vector<std::pair<std::string, int>>;

bool eval_in_scope(const Formula& f, const FiniteModel& m, Scope& scope) {
    switch (f.kind()) {
        case Kind::Pred: {
            auto it = std::find_if(scope.rbegin(), scope.rend(),
                                   [&f](const auto& b) { return b.first == f.var(); });
            if (it == scope.rend()) {
                throw Error("OpenFormula", "variable '" + f.var() + "' is not bound");
            }
            return m.contains(f.name(), it->second);
        }
        case Kind::Not:
            return !eval_in_scope(f.child(), m, scope);
        case Kind::And:
            return std::all_of(f.parts().begin(), f.parts().end(), [&](const Formula& p) {
                return eval_in_scope(p, m, scope);
            });
        case Kind::Or:
            return std::any_of(f.parts().begin(), f.parts().end(), [&](const Formula& p) {
                return eval_in_scope(p, m, scope);
            });
        case Kind::Implies:
            return !eval_in_scope(f.lhs(), m, scope) || eval_in_scope(f.rhs(), m, scope);
        case Kind::Equiv:
            return eval_in_scope(f.lhs(), m, scope) == eval_in_scope(f.rhs(), m, scope);
        case Kind::Forall:
        case Kind::Exists: {
            const bool universal = f.kind() == Kind::Forall;
            for (int element = 0; element < m.domain_size; ++element) {
                scope.emplace_back(f.var(), element);
                const bool value = eval_in_scope(f.body(), m, scope);
                scope.pop_back();
                if (universal && !value) return false;
                if (!universal && value) return true;
            }
            return universal;
        }
        case Kind::Atom:
        case Kind::Var:
            throw Error("UnsupportedNode",
                        "finite models interpret predicates, not bare atoms");
    }
    return false;
}

}  // namespace

namespace {

void reject_unsupported_nodes(const Formula& f) {
    switch (f.kind()) {
        case Kind::Atom:
        case Kind::Var:
            throw Error("UnsupportedNode",
                        "finite models interpret predicates, not bare atoms");
        case Kind::Pred:
            return;
        default:
            for (const Formula& part : f.parts()) reject_unsupported_nodes(part);
            return;
    }
}

}  // namespace

bool eval_finite_model(const Formula& f, const FiniteModel& m) {
    reject_unsupported_nodes(f);
    if (!is_closed(f)) {
        throw Error("OpenFormula", "formula has free variables");
    }
    Scope scope;
    return eval_in_scope(f, m, scope);
}

}  // namespace la
