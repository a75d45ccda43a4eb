#ifndef LA_TESTS_RANDOM_FORMULA_HPP
#define LA_TESTS_RANDOM_FORMULA_HPP

#include <random>
#include <string>
#include <vector>

#include "la/formula.hpp"

namespace la::testing {

// Seeded generator for random formulas. Var nodes are never produced in
// formula position (the operator syntax cannot express them), and quantified
// formulas are always closed.
class FormulaGen {
public:
    explicit FormulaGen(unsigned seed,
                        std::vector<std::string> atoms = {"P", "Q", "R", "S", "T", "U"})
        : rng_(seed), atoms_(std::move(atoms)) {}

    std::mt19937& rng() { return rng_; }

    Formula propositional(int max_depth) {
        if (max_depth <= 0 || pick(100) < 30) {
            return atom(atoms_[pick(atoms_.size())]);
        }
        const int choice = pick(100);
        if (choice < 50) return neg(propositional(max_depth - 1));
        if (choice < 65) return nary(Kind::And, max_depth);
        if (choice < 80) return nary(Kind::Or, max_depth);
        if (choice < 93) {
            return implies(propositional(max_depth - 1), propositional(max_depth - 1));
        }
        return equiv(propositional(max_depth - 1), propositional(max_depth - 1));
    }

    // Random implication whose sides are small propositional formulas.
    Formula implication(int side_depth) {
        return implies(propositional(side_depth), propositional(side_depth));
    }

    // Closed monadic quantified formula.
    Formula quantified(int max_depth) {
        std::vector<std::string> scope;
        return quantified_at(max_depth, scope);
    }

    // Either fragment; used by serializer round-trip sweeps.
    Formula any(int max_depth) {
        return pick(100) < 70 ? propositional(max_depth) : quantified(max_depth);
    }

private:
    Formula nary(Kind kind, int max_depth) {
        const std::size_t arity = 2 + pick(2);
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < arity; ++i) {
            parts.push_back(propositional(max_depth - 1));
        }
        return kind == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }

    Formula quantified_at(int max_depth, std::vector<std::string>& scope) {
        if (scope.empty() || (max_depth > 0 && pick(100) < 35)) {
            const std::string var = "x" + std::to_string(scope.size());
            scope.push_back(var);
            Formula body = quantified_body(max_depth - 1, scope);
            scope.pop_back();
            return pick(2) == 0 ? forall(var, std::move(body))
                                : exists(var, std::move(body));
        }
        return quantified_body(max_depth, scope);
    }

    Formula quantified_body(int max_depth, std::vector<std::string>& scope) {
        if (max_depth <= 0 || pick(100) < 35) {
            return pred(atoms_[pick(atoms_.size())], scope[pick(scope.size())]);
        }
        const int choice = pick(100);
        if (choice < 20) return neg(quantified_body(max_depth - 1, scope));
        if (choice < 40) {
            return conj({quantified_body(max_depth - 1, scope),
                         quantified_body(max_depth - 1, scope)});
        }
        if (choice < 60) {
            return disj({quantified_body(max_depth - 1, scope),
                         quantified_body(max_depth - 1, scope)});
        }
        if (choice < 85) {
            return implies(quantified_body(max_depth - 1, scope),
                           quantified_body(max_depth - 1, scope));
        }
        return quantified_at(max_depth - 1, scope);
    }

    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }

    std::mt19937 rng_;
    std::vector<std::string> atoms_;
};

}  // namespace la::testing

#endif
