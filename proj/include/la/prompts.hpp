#ifndef LA_PROMPTS_HPP
#define LA_PROMPTS_HPP

#include <string>
#include <vector>

#include "la/backend.hpp"
#include "la/task.hpp"

namespace la {

struct DemoStep {
    std::string act;
    std::string obs;  // empty on the terminal step
};

struct AnswerDemo {
    std::string input;
    std::string reasoning;  // cot only
    std::string answer;
};

struct AgentDemo {
    std::string input;
    std::vector<DemoStep> steps;
};

struct ParseDemo {
    std::string input;
    std::string output;
};

// The in-context demonstrations, shipped as a versioned fixture file and
// embedded into the binary at build time.
struct Demos {
    int version = 0;
    std::vector<AnswerDemo> direct_mcrc, direct_nli, direct_tf;
    std::vector<AnswerDemo> cot_mcrc, cot_nli, cot_tf;
    std::vector<AgentDemo> agent;
    std::vector<ParseDemo> parse;

    const std::vector<AnswerDemo>& answer_demos(const std::string& mode,
                                                const std::string& task) const;
};

const Demos& builtin_demos();
Demos load_demos(const std::string& path);  // throws Error{"IoError"}
Demos parse_demos(const std::string& json_text, const std::string& origin);

// Task text per the preprocessing rules: mcrc combines context, question and
// options; nli prefixes Premise:/Hypothesis:; tf concatenates context and
// question.
std::string format_record_text(const TaskRecord& record);

// The record's pre-formalized logic rendered as an Atoms/Premises (and
// Targets) block. Empty string when the record has no logic block.
std::string logic_block_text(const TaskRecord& record);

// Messages for the single-completion modes (direct, cot, la-ablation) and
// the opening messages of an la run. Deterministic in (record, mode, shots,
// demos). Throws Error{"UnknownMode"}.
std::vector<ChatMessage> build_prompt(const TaskRecord& record, const std::string& mode,
                                      int shots, const Demos& demos);

// Prompt asking a model to translate the record into logic-form lines.
std::vector<ChatMessage> build_parse_prompt(const TaskRecord& record, int shots,
                                            const Demos& demos);

// System instruction + demo exchanges for the la action loop; the caller
// appends the task presentation once premises are parsed.
std::vector<ChatMessage> agent_prelude(const TaskRecord& record, int shots,
                                       const Demos& demos);

// The la task presentation given the already-rendered logic sections.
std::string agent_presentation(const TaskRecord& record, const std::string& atoms_block,
                               const std::string& premises_block,
                               const std::string& targets_block);

}  // namespace la

#endif
