#include "la/truth_table.hpp"

#include <algorithm>
#include <bit>

#include "la/error.hpp"

namespace la {

namespace {

// Truth patterns of atoms 0..5 within one 64-lane block: bit j of PATTERN[i]
// is ((j >> i) & 1). Atoms 6 and above are constant within a block.
constexpr std::uint64_t kAtomPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

std::uint64_t atom_word(std::uint32_t index, std::uint64_t block) {
    if (index < 6) return kAtomPattern[index];
    return (block >> (index - 6)) & 1 ? ~0ull : 0ull;
}

void compile_into(const Formula& f, const std::vector<std::string>& order,
                  CompiledFormula& out, std::uint32_t& depth) {
    switch (f.kind()) {
        case Kind::Atom: {
            auto it = std::find(order.begin(), order.end(), f.name());
            if (it == order.end()) {
                throw Error("UnboundAtom", "atom '" + f.name() + "' has no assignment");
            }
            out.code.push_back({CompiledFormula::Op::PushAtom,
                                static_cast<std::uint32_t>(it - order.begin())});
            out.max_stack = std::max(out.max_stack, ++depth);
            return;
        }
        case Kind::Not:
            compile_into(f.child(), order, out, depth);
            out.code.push_back({CompiledFormula::Op::Not, 0});
            return;
        case Kind::And:
        case Kind::Or: {
            for (const Formula& part : f.parts()) compile_into(part, order, out, depth);
            const auto arity = static_cast<std::uint32_t>(f.parts().size());
            out.code.push_back({f.kind() == Kind::And ? CompiledFormula::Op::And
                                                      : CompiledFormula::Op::Or,
                                arity});
            depth -= arity - 1;
            return;
        }
        case Kind::Implies:
        case Kind::Equiv:
            compile_into(f.lhs(), order, out, depth);
            compile_into(f.rhs(), order, out, depth);
            out.code.push_back({f.kind() == Kind::Implies ? CompiledFormula::Op::Implies
                                                          : CompiledFormula::Op::Equiv,
                                0});
            --depth;
            return;
        case Kind::Var:
        case Kind::Pred:
        case Kind::Forall:
        case Kind::Exists:
            throw Error("UnsupportedNode",
                        "truth tables are defined for propositional formulas only");
    }
}

struct BlockRange {
    std::uint64_t blocks;
    std::uint64_t last_mask;  // valid lanes in the final (only partial) block
};

BlockRange block_range(std::uint32_t num_atoms) {
    if (num_atoms >= 6) return {1ull << (num_atoms - 6), ~0ull};
    return {1, (1ull << (1u << num_atoms)) - 1};
}

// Worth spinning up threads only once the block count clears the OpenMP
// scheduling overhead; below this the serial sweep wins.
constexpr std::uint64_t kParallelBlockThreshold = 64;

}  // namespace

CompiledFormula compile(const Formula& f, const std::vector<std::string>& order) {
    CompiledFormula out;
    std::uint32_t depth = 0;
    compile_into(f, order, out, depth);
    return out;
}

std::uint64_t eval_block(const CompiledFormula& f, std::uint64_t block,
                         std::vector<std::uint64_t>& stack) {
    stack.resize(f.max_stack);
    std::size_t top = 0;
    for (const auto& instr : f.code) {
        switch (instr.op) {
            case CompiledFormula::Op::PushAtom:
                stack[top++] = atom_word(instr.arg, block);
                break;
            case CompiledFormula::Op::Not:
                stack[top - 1] = ~stack[top - 1];
                break;
            case CompiledFormula::Op::And: {
                std::uint64_t acc = stack[--top];
                for (std::uint32_t k = 1; k < instr.arg; ++k) acc &= stack[--top];
                stack[top++] = acc;
                break;
            }
            case CompiledFormula::Op::Or: {
                std::uint64_t acc = stack[--top];
                for (std::uint32_t k = 1; k < instr.arg; ++k) acc |= stack[--top];
                stack[top++] = acc;
                break;
            }
            case CompiledFormula::Op::Implies: {
                std::uint64_t rhs = stack[--top];
                stack[top - 1] = ~stack[top - 1] | rhs;
                break;
            }
            case CompiledFormula::Op::Equiv: {
                std::uint64_t rhs = stack[--top];
                stack[top - 1] = ~(stack[top - 1] ^ rhs);
                break;
            }
        }
    }
    return stack[0];
}

namespace {

EntailmentCounts entailment_block(const std::vector<CompiledFormula>& premises,
                                  const CompiledFormula& hypothesis,
                                  std::uint64_t block, std::uint64_t mask,
                                  std::vector<std::uint64_t>& stack) {
    std::uint64_t sat = mask;
    for (const CompiledFormula& p : premises) {
        sat &= eval_block(p, block, stack);
        if (sat == 0) return {0, 0};
    }
    const std::uint64_t hyp = eval_block(hypothesis, block, stack);
    return {static_cast<std::uint64_t>(std::popcount(sat)),
            static_cast<std::uint64_t>(std::popcount(sat & hyp))};
}

}  // namespace

EntailmentCounts scan_entailment_serial(const std::vector<CompiledFormula>& premises,
                                        const CompiledFormula& hypothesis,
                                        std::uint32_t num_atoms) {
    const auto [blocks, last_mask] = block_range(num_atoms);
    EntailmentCounts total;
    std::vector<std::uint64_t> stack;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t mask = b + 1 == blocks ? last_mask : ~0ull;
        const EntailmentCounts c = entailment_block(premises, hypothesis, b, mask, stack);
        total.premise_sat += c.premise_sat;
        total.hypothesis_true += c.hypothesis_true;
    }
    return total;
}

EntailmentCounts scan_entailment(const std::vector<CompiledFormula>& premises,
                                 const CompiledFormula& hypothesis,
                                 std::uint32_t num_atoms) {
    const auto [blocks, last_mask] = block_range(num_atoms);
    if (blocks < kParallelBlockThreshold) {
        return scan_entailment_serial(premises, hypothesis, num_atoms);
    }
    std::uint64_t sat = 0;
    std::uint64_t hyp = 0;
#pragma omp parallel reduction(+ : sat, hyp)
    {
        std::vector<std::uint64_t> stack;
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            const std::uint64_t mask =
                static_cast<std::uint64_t>(b) + 1 == blocks ? last_mask : ~0ull;
            const EntailmentCounts c = entailment_block(
                premises, hypothesis, static_cast<std::uint64_t>(b), mask, stack);
            sat += c.premise_sat;
            hyp += c.hypothesis_true;
        }
    }
    return {sat, hyp};
}

std::uint64_t scan_agreement_serial(const CompiledFormula& f, const CompiledFormula& g,
                                    std::uint32_t num_atoms) {
    const auto [blocks, last_mask] = block_range(num_atoms);
    std::uint64_t agree = 0;
    std::vector<std::uint64_t> stack;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t mask = b + 1 == blocks ? last_mask : ~0ull;
        agree += std::popcount(~(eval_block(f, b, stack) ^ eval_block(g, b, stack)) & mask);
    }
    return agree;
}

std::uint64_t scan_agreement(const CompiledFormula& f, const CompiledFormula& g,
                             std::uint32_t num_atoms) {
    const auto [blocks, last_mask] = block_range(num_atoms);
    if (blocks < kParallelBlockThreshold) {
        return scan_agreement_serial(f, g, num_atoms);
    }
    std::uint64_t agree = 0;
#pragma omp parallel reduction(+ : agree)
    {
        std::vector<std::uint64_t> stack;
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            const std::uint64_t mask =
                static_cast<std::uint64_t>(b) + 1 == blocks ? last_mask : ~0ull;
            agree += std::popcount(
                ~(eval_block(f, static_cast<std::uint64_t>(b), stack) ^
                  eval_block(g, static_cast<std::uint64_t>(b), stack)) &
                mask);
        }
    }
    return agree;
}

}  // namespace la
