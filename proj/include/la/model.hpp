#ifndef LA_MODEL_HPP
#define LA_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>

#include "la/formula.hpp"

namespace la {

// Finite interpretation for monadic quantified formulas: a domain
// {0..domain_size-1} and one extension subset per predicate, stored as a
// bitmask over the domain.
struct FiniteModel {
    int domain_size = 1;
    std::map<std::string, std::uint32_t> extensions;

    bool contains(const std::string& predicate, int element) const {
        auto it = extensions.find(predicate);
        if (it == extensions.end()) return false;
        return (it->second >> element) & 1;
    }
};

// Forall/Exists range over the model's domain; Pred(S, x) is true iff the
// element bound to x lies in extensions[S]. Predicates without a declared
// extension are empty. Throws Error{"OpenFormula"} if f has free variables
// and Error{"UnsupportedNode"} on bare Atom or Var nodes, which have no
// finite-model semantics here.
bool eval_finite_model(const Formula& f, const FiniteModel& m);

}  // namespace la

#endif
