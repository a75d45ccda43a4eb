#ifndef LA_AGENT_HPP
#define LA_AGENT_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "la/backend.hpp"
#include "la/derivation.hpp"
#include "la/prompts.hpp"
#include "la/task.hpp"

namespace la {

enum class ParserMode { Self, External, Deterministic };

ParserMode parser_mode_from(const std::string& name);  // throws Error{"UnknownMode"}

// The problem in logic form: an atom glossary, premises, and the formulas to
// evaluate (option labels for mcrc, the single label "H" for nli/tf).
struct ParsedProblem {
    std::vector<std::pair<std::string, std::string>> glossary;
    std::vector<RuleValue> premises;
    std::vector<std::pair<std::string, RuleValue>> targets;
};

// The action grammar. One action per assistant turn:
//   PREMISE: <formula>
//   CALL <RuleName>(<step id or formula>[, ...])
//   NORMALIZE <step id>
//   EVAL <label>: <formula>
//   ANSWER: <label>
// Free-form reasoning around the action line is permitted and ignored; the
// first line of the final block of action lines wins.
struct ActionPremise {
    RuleValue value;
};
struct ActionCall {
    std::string rule;
    std::vector<std::variant<int, RuleValue>> args;
};
struct ActionNormalize {
    int step;
};
struct ActionEval {
    std::string label;
    RuleValue value;
};
struct ActionAnswer {
    std::string label;
};
using AgentAction =
    std::variant<ActionPremise, ActionCall, ActionNormalize, ActionEval, ActionAnswer>;

// Throws Error{"NoActionFound"} when no line resembles an action and
// Error{"MalformedAction"} (with line/position info in the message) when an
// action-shaped line does not parse.
AgentAction parse_action(const std::string& assistant_text);

struct TranscriptEvent {
    int step = 0;  // backend call ordinal
    std::string kind;  // llm | action | tool | final
    std::string content;
    nlohmann::json detail;
};

struct AgentTranscript {
    std::string task_id;
    std::vector<ChatMessage> messages;
    std::vector<TranscriptEvent> events;
    KnowledgeBase kb;  // final state; every non-premise entry is rule-derived
    std::string final_answer;
    bool abstained = false;
    std::string abstain_reason;
    int backend_calls = 0;
    int rule_steps = 0;
    double duration_s = 0.0;  // not serialized; transcripts stay byte-stable
};

// One JSON object per event: {"step", "kind", "content", "detail"}.
std::string transcript_to_jsonl(const AgentTranscript& transcript);

struct AgentConfig {
    int max_steps = 16;      // backend call budget for the whole run
    int repair_budget = 3;   // consecutive malformed emissions before abstaining
    int shots = 3;
    int max_domain = 3;      // finite-model check range for categorical content
    ParserMode parser_mode = ParserMode::Deterministic;
};

// Translates the record into logic forms. Self/External prompt the given
// backend with the parse template and repair each bad line up to 3 attempts
// (attempts, not retries: the third failure aborts); Deterministic reads the
// record's logic block with zero backend calls. Throws
// Error{"ParseBudgetExhausted"} and propagates backend errors.
ParsedProblem parse_problem(const TaskRecord& record, ParserMode mode, Backend* backend,
                            const Demos& demos, int shots = 3,
                            AgentTranscript* trace = nullptr, int max_calls = 16);

// The rule-guided generation loop. No errors escape: every failure becomes
// an abstention recorded in the transcript, and the loop always terminates
// within config.max_steps backend calls.
AgentTranscript run_agent(const TaskRecord& record, const AgentConfig& config,
                          Backend& backend, const Demos& demos,
                          Backend* external_parser = nullptr);

}  // namespace la

#endif
