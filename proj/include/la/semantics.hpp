#ifndef LA_SEMANTICS_HPP
#define LA_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "la/formula.hpp"

namespace la {

// Total assignment over the atoms it is applied to.
using Valuation = std::map<std::string, bool>;

// Classical truth-functional semantics. Implies(a,b) is false iff a is true
// and b false; Equiv is true iff both sides agree.
// Throws Error{"UnboundAtom"} for atoms missing from v and
// Error{"UnsupportedNode"} for quantified content.
bool evaluate(const Formula& f, const Valuation& v);

enum class EntailmentVerdict { Valid, Contradicted, Unknown };

std::string to_string(EntailmentVerdict v);

// Exhaustive truth-table enumeration cap: 2^20 rows stays well under a
// second; anything larger errors rather than silently sampling.
constexpr std::size_t kMaxEntailmentAtoms = 20;

// Valid iff every valuation satisfying all premises satisfies the
// hypothesis; Contradicted iff every such valuation falsifies it; Unknown
// otherwise. An unsatisfiable premise set yields Valid for every hypothesis
// (classical explosion). Throws Error{"TooManyAtoms"} above the cap and
// Error{"UnsupportedNode"} on quantified content.
EntailmentVerdict classify_entailment(const std::vector<Formula>& premises,
                                      const Formula& hypothesis);

// True iff f and g agree under every valuation over the union of their atoms.
bool equivalent(const Formula& f, const Formula& g);

// Naive per-valuation tree walk, kept as the independent reference for the
// bitsliced kernel. Same contracts as above.
namespace reference {
EntailmentVerdict classify_entailment(const std::vector<Formula>& premises,
                                      const Formula& hypothesis);
bool equivalent(const Formula& f, const Formula& g);
}  // namespace reference

}  // namespace la

#endif
