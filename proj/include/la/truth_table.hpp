#ifndef LA_TRUTH_TABLE_HPP
#define LA_TRUTH_TABLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "la/formula.hpp"

namespace la {

// Propositional formula compiled to a postfix program over atom slots.
// The evaluator is bitsliced: one std::uint64_t word carries the formula's
// truth value for 64 consecutive valuations, so a full 2^n-row truth table
// is swept in 2^(n-6) word operations per node.
struct CompiledFormula {
    enum class Op : std::uint8_t { PushAtom, Not, And, Or, Implies, Equiv };
    struct Instr {
        Op op;
        std::uint32_t arg;  // atom index for PushAtom, arity for And/Or
    };
    std::vector<Instr> code;
    std::uint32_t max_stack = 0;
};

// Throws Error{"UnsupportedNode"} on quantified content and
// Error{"UnboundAtom"} when a formula mentions an atom missing from `order`.
CompiledFormula compile(const Formula& f, const std::vector<std::string>& order);

// Truth value of the compiled formula for 64 valuations at once. Lane j of
// the result corresponds to valuation index block*64 + j, whose bit i gives
// atom i's assignment.
std::uint64_t eval_block(const CompiledFormula& f, std::uint64_t block,
                         std::vector<std::uint64_t>& stack);

struct EntailmentCounts {
    std::uint64_t premise_sat = 0;      // valuations satisfying every premise
    std::uint64_t hypothesis_true = 0;  // of those, how many satisfy the hypothesis
};

// Sweeps all 2^num_atoms valuations. `premises` may be empty (vacuously
// satisfied). The OpenMP variant splits the block range across threads;
// both return identical counts.
EntailmentCounts scan_entailment_serial(const std::vector<CompiledFormula>& premises,
                                        const CompiledFormula& hypothesis,
                                        std::uint32_t num_atoms);
EntailmentCounts scan_entailment(const std::vector<CompiledFormula>& premises,
                                 const CompiledFormula& hypothesis,
                                 std::uint32_t num_atoms);

// Number of valuations on which f and g agree.
std::uint64_t scan_agreement_serial(const CompiledFormula& f, const CompiledFormula& g,
                                    std::uint32_t num_atoms);
std::uint64_t scan_agreement(const CompiledFormula& f, const CompiledFormula& g,
                             std::uint32_t num_atoms);

}  // namespace la

#endif
