#include "la/agent.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "la/error.hpp"
#include "la/parser.hpp"

namespace la {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = i + 1;
        }
    }
    return lines;
}

RuleValue parse_value(const std::string& text) {
    if (looks_like_statement(text)) return parse_statement(text);
    return parse_formula(text);
}

bool is_integer(const std::string& text) {
    if (text.empty()) return false;
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Splits "a, b, c" at top-level commas (parentheses nest).
std::vector<std::string> split_args(const std::string& text) {
    std::vector<std::string> args;
    int depth = 0;
    std::string current;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            args.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    args.push_back(trim(current));
    return args;
}

bool action_like(const std::string& line) {
    const std::string t = trim(line);
    return t.rfind("PREMISE:", 0) == 0 || t.rfind("CALL ", 0) == 0 ||
           t.rfind("NORMALIZE ", 0) == 0 || t.rfind("EVAL ", 0) == 0 ||
           t.rfind("ANSWER:", 0) == 0;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
    throw Error("MalformedAction", "line " + std::to_string(line_no) + ": " + why);
}

std::string strip_label(std::string label) {
    label = trim(label);
    while (!label.empty() && (label.back() == '.' || label.back() == ',')) {
        label.pop_back();
    }
    return label;
}

AgentAction parse_action_line(const std::string& raw, std::size_t line_no) {
    const std::string line = trim(raw);
    try {
        if (line.rfind("PREMISE:", 0) == 0) {
            return ActionPremise{parse_value(trim(line.substr(8)))};
        }
        if (line.rfind("NORMALIZE ", 0) == 0) {
            const std::string arg = trim(line.substr(10));
            if (!is_integer(arg)) malformed(line_no, "NORMALIZE expects a step id");
            return ActionNormalize{std::stoi(arg)};
        }
        if (line.rfind("ANSWER:", 0) == 0) {
            const std::string label = strip_label(line.substr(7));
            if (label.empty() || label.find(' ') != std::string::npos) {
                malformed(line_no, "ANSWER expects a single label");
            }
            return ActionAnswer{label};
        }
        if (line.rfind("EVAL ", 0) == 0) {
            const std::string rest = line.substr(5);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) {
                malformed(line_no, "EVAL expects '<label>: <formula>'");
            }
            const std::string label = strip_label(rest.substr(0, colon));
            if (label.empty() || !std::all_of(label.begin(), label.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                })) {
                malformed(line_no, "EVAL label must be alphanumeric");
            }
            return ActionEval{label, parse_value(trim(rest.substr(colon + 1)))};
        }
        if (line.rfind("CALL ", 0) == 0) {
            const std::string rest = trim(line.substr(5));
            const auto open = rest.find('(');
            const auto close = rest.rfind(')');
            if (open == std::string::npos || close == std::string::npos || close < open) {
                malformed(line_no, "CALL expects '<RuleName>(<arguments>)'");
            }
            const std::string rule = trim(rest.substr(0, open));
            if (!valid_identifier(rule)) {
                malformed(line_no, "'" + rule + "' is not a rule name");
            }
            if (!trim(rest.substr(close + 1)).empty()) {
                malformed(line_no, "unexpected text after ')'");
            }
            ActionCall call{rule, {}};
            for (const std::string& arg : split_args(rest.substr(open + 1, close - open - 1))) {
                if (arg.empty()) malformed(line_no, "empty argument in CALL");
                if (is_integer(arg)) {
                    call.args.emplace_back(std::stoi(arg));
                } else {
                    call.args.emplace_back(parse_value(arg));
                }
            }
            return call;
        }
    } catch (const Error& e) {
        if (e.code() == "MalformedAction") throw;
        malformed(line_no, e.what());
    }
    malformed(line_no, "unrecognized action line");
}

std::string render_action(const AgentAction& action) {
    if (const auto* premise = std::get_if<ActionPremise>(&action)) {
        return "PREMISE: " + serialize(premise->value);
    }
    if (const auto* call = std::get_if<ActionCall>(&action)) {
        std::string out = "CALL " + call->rule + "(";
        for (std::size_t i = 0; i < call->args.size(); ++i) {
            if (i > 0) out += ", ";
            if (const int* id = std::get_if<int>(&call->args[i])) {
                out += std::to_string(*id);
            } else {
                out += serialize(std::get<RuleValue>(call->args[i]));
            }
        }
        return out + ")";
    }
    if (const auto* norm = std::get_if<ActionNormalize>(&action)) {
        return "NORMALIZE " + std::to_string(norm->step);
    }
    if (const auto* eval = std::get_if<ActionEval>(&action)) {
        return "EVAL " + eval->label + ": " + serialize(eval->value);
    }
    return "ANSWER: " + std::get<ActionAnswer>(action).label;
}

std::vector<std::string> value_atoms(const RuleValue& value) {
    if (const auto* f = std::get_if<Formula>(&value)) return atoms(*f);
    const auto& s = std::get<CategoricalStatement>(value);
    return {s.subject, s.predicate};
}

void autofill_glossary(ParsedProblem& problem) {
    auto known = [&problem](const std::string& name) {
        return std::any_of(problem.glossary.begin(), problem.glossary.end(),
                           [&name](const auto& entry) { return entry.first == name; });
    };
    auto merge = [&](const RuleValue& value) {
        for (const std::string& name : value_atoms(value)) {
            if (!known(name)) problem.glossary.emplace_back(name, name);
        }
    };
    for (const RuleValue& p : problem.premises) merge(p);
    for (const auto& [label, value] : problem.targets) merge(value);
}

std::string verdict_feedback(EntailmentVerdict verdict) {
    switch (verdict) {
        case EntailmentVerdict::Valid: return "VALID";
        case EntailmentVerdict::Contradicted: return "INVALID";
        case EntailmentVerdict::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

}  // namespace

ParserMode parser_mode_from(const std::string& name) {
    if (name == "self") return ParserMode::Self;
    if (name == "external") return ParserMode::External;
    if (name == "deterministic") return ParserMode::Deterministic;
    throw Error("UnknownMode", "unknown parser mode '" + name + "'");
}

AgentAction parse_action(const std::string& assistant_text) {
    const std::vector<std::string> lines = split_lines(assistant_text);
    // The final contiguous block of action-like lines wins; within it, the
    // first line is the action taken.
    std::size_t block_start = lines.size();
    std::size_t i = lines.size();
    while (i > 0) {
        --i;
        if (action_like(lines[i])) {
            block_start = i;
            while (block_start > 0 && action_like(lines[block_start - 1])) --block_start;
            return parse_action_line(lines[block_start], block_start + 1);
        }
    }
    throw Error("NoActionFound", "no PREMISE/CALL/NORMALIZE/EVAL/ANSWER line found");
}

std::string transcript_to_jsonl(const AgentTranscript& transcript) {
    std::string out;
    for (const TranscriptEvent& event : transcript.events) {
        nlohmann::json row;
        row["step"] = event.step;
        row["kind"] = event.kind;
        row["content"] = event.content;
        row["detail"] = event.detail.is_null() ? nlohmann::json::object() : event.detail;
        out += row.dump();
        out += '\n';
    }
    return out;
}

ParsedProblem parse_problem(const TaskRecord& record, ParserMode mode, Backend* backend,
                            const Demos& demos, int shots, AgentTranscript* trace,
                            int max_calls) {
    ParsedProblem problem;

    if (mode == ParserMode::Deterministic) {
        if (!record.has_logic) {
            throw Error("SchemaError",
                        "record '" + record.id +
                            "' has no logic block for the deterministic parser");
        }
        problem.glossary = record.logic_atoms;
        for (const std::string& text : record.logic_premises) {
            problem.premises.push_back(parse_value(text));
        }
        for (const auto& [label, text] : record.logic_options) {
            problem.targets.emplace_back(label, parse_value(text));
        }
        if (problem.targets.empty() && !record.logic_hypothesis.empty()) {
            problem.targets.emplace_back("H", parse_value(record.logic_hypothesis));
        }
        autofill_glossary(problem);
        return problem;
    }

    if (backend == nullptr) {
        throw Error("IoError", "parser mode requires a backend");
    }

    int local_calls = 0;
    int& calls = trace != nullptr ? trace->backend_calls : local_calls;
    std::vector<ChatMessage> messages = build_parse_prompt(record, shots, demos);
    auto call = [&]() -> std::string {
        if (calls >= max_calls) {
            throw Error("ParseBudgetExhausted",
                        "backend call budget exhausted while parsing");
        }
        std::string reply = backend->complete(messages);
        ++calls;
        if (trace != nullptr) {
            trace->events.push_back(
                {calls, "llm", reply, nlohmann::json{{"phase", "parse"}}});
        }
        return reply;
    };

    // One logic-form line; bad lines get up to 3 parse attempts in total,
    // with the ParseError fed back between attempts.
    auto parse_line_with_repairs = [&](std::string line) -> std::string {
        for (int attempt = 1;; ++attempt) {
            try {
                (void)parse_value(line);
                return line;
            } catch (const ParseError& e) {
                if (attempt >= 3) {
                    throw Error("ParseBudgetExhausted",
                                "line '" + line + "' failed to parse after " +
                                    std::to_string(attempt) + " attempts: " + e.what());
                }
                messages.push_back(
                    {"user", std::string("Line '") + line + "' failed to parse: " +
                                 e.what() + ". Re-emit just that line, corrected."});
                const std::string reply = call();
                messages.push_back({"assistant", reply});
                std::string repaired;
                for (const std::string& candidate : split_lines(reply)) {
                    if (!trim(candidate).empty()) {
                        repaired = trim(candidate);
                        break;
                    }
                }
                const auto colon = repaired.find(':');
                // Accept either the bare formula or a re-emitted full line.
                if (colon != std::string::npos &&
                    (repaired.rfind("PREMISE:", 0) == 0 ||
                     repaired.rfind("OPTION ", 0) == 0 ||
                     repaired.rfind("HYPOTHESIS:", 0) == 0)) {
                    repaired = trim(repaired.substr(colon + 1));
                }
                line = repaired;
            }
        }
    };

    const std::string reply = call();
    messages.push_back({"assistant", reply});
    for (const std::string& raw : split_lines(reply)) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("ATOM ", 0) == 0) {
            const std::string rest = line.substr(5);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) continue;
            const std::string name = trim(rest.substr(0, colon));
            if (valid_identifier(name)) {
                problem.glossary.emplace_back(name, trim(rest.substr(colon + 1)));
            }
            continue;
        }
        if (line.rfind("PREMISE:", 0) == 0) {
            const std::string text = parse_line_with_repairs(trim(line.substr(8)));
            problem.premises.push_back(parse_value(text));
            continue;
        }
        if (line.rfind("OPTION ", 0) == 0) {
            const std::string rest = line.substr(7);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) continue;
            const std::string label = strip_label(rest.substr(0, colon));
            const std::string text = parse_line_with_repairs(trim(rest.substr(colon + 1)));
            problem.targets.emplace_back(label, parse_value(text));
            continue;
        }
        if (line.rfind("HYPOTHESIS:", 0) == 0) {
            const std::string text = parse_line_with_repairs(trim(line.substr(11)));
            problem.targets.emplace_back("H", parse_value(text));
            continue;
        }
        // Anything else is surrounding prose; ignored.
    }

    if (problem.premises.empty()) {
        throw Error("ParseBudgetExhausted", "model emitted no premises");
    }
    if (problem.targets.empty()) {
        throw Error("ParseBudgetExhausted", "model emitted no options or hypothesis");
    }
    autofill_glossary(problem);
    return problem;
}

namespace {

std::string presentation_from(const TaskRecord& record, const ParsedProblem& problem) {
    std::string atoms_block;
    for (const auto& [name, phrase] : problem.glossary) {
        atoms_block += name + ": " + phrase + "\n";
    }
    std::string premises_block;
    for (std::size_t i = 0; i < problem.premises.size(); ++i) {
        premises_block +=
            "[" + std::to_string(i + 1) + "] " + serialize(problem.premises[i]) + "\n";
    }
    std::string targets_block;
    for (const auto& [label, value] : problem.targets) {
        targets_block += label + ": " + serialize(value) + "\n";
    }
    auto chomp = [](std::string& s) {
        if (!s.empty()) s.pop_back();
    };
    chomp(atoms_block);
    chomp(premises_block);
    chomp(targets_block);
    return agent_presentation(record, atoms_block, premises_block, targets_block);
}

}  // namespace

AgentTranscript run_agent(const TaskRecord& record, const AgentConfig& config,
                          Backend& backend, const Demos& demos,
                          Backend* external_parser) {
    const auto t0 = std::chrono::steady_clock::now();
    AgentTranscript tr;
    tr.task_id = record.id;
    const std::vector<std::string> labels = task_labels(record.task, &record);

    auto elapsed = [&t0]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };
    auto finish = [&](const std::string& answer, bool abstained,
                      const std::string& reason) {
        tr.final_answer = answer;
        tr.abstained = abstained;
        tr.abstain_reason = reason;
        nlohmann::json detail{{"abstained", abstained}, {"rule_steps", tr.rule_steps}};
        if (abstained) detail["reason"] = reason;
        tr.events.push_back({tr.backend_calls, "final", answer, std::move(detail)});
        tr.duration_s = elapsed();
    };

    ParsedProblem problem;
    try {
        Backend* parse_backend = nullptr;
        if (config.parser_mode == ParserMode::Self) {
            parse_backend = &backend;
        } else if (config.parser_mode == ParserMode::External) {
            if (external_parser == nullptr) {
                throw Error("IoError", "external parser backend not configured");
            }
            parse_backend = external_parser;
        }
        problem = parse_problem(record, config.parser_mode, parse_backend, demos,
                                config.shots, &tr, config.max_steps);
    } catch (const Error& e) {
        finish(abstention_label(record.task), true, e.what());
        return tr;
    }

    KnowledgeBase& kb = tr.kb;
    for (const RuleValue& premise : problem.premises) kb.assert_premise(premise);

    std::vector<ChatMessage> messages = agent_prelude(record, config.shots, demos);
    messages.push_back({"user", presentation_from(record, problem)});

    int consecutive_malformed = 0;
    while (tr.backend_calls < config.max_steps) {
        std::string reply;
        try {
            reply = backend.complete(messages);
        } catch (const Error& e) {
            tr.messages = std::move(messages);
            finish(abstention_label(record.task), true, e.what());
            return tr;
        }
        ++tr.backend_calls;
        {
            std::string last_user;
            for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
                if (it->role == "user") {
                    last_user = it->content;
                    break;
                }
            }
            tr.events.push_back({tr.backend_calls, "llm", reply,
                                 nlohmann::json{{"phase", "act"},
                                                {"last_user", last_user}}});
        }
        messages.push_back({"assistant", reply});

        std::optional<AgentAction> parsed;
        try {
            parsed = parse_action(reply);
        } catch (const Error& e) {
            const std::string feedback =
                std::string("Error ") + e.what() + ". Respond with exactly one action line.";
            tr.events.push_back({tr.backend_calls, "action", "",
                                 nlohmann::json{{"error", e.code()}}});
            tr.events.push_back({tr.backend_calls, "tool", feedback,
                                 nlohmann::json{{"error", e.code()}}});
            messages.push_back({"user", feedback});
            if (++consecutive_malformed >= config.repair_budget) {
                tr.messages = std::move(messages);
                finish(abstention_label(record.task), true, "repair budget exhausted");
                return tr;
            }
            continue;
        }
        const AgentAction& action = *parsed;

        if (const auto* answer = std::get_if<ActionAnswer>(&action)) {
            tr.events.push_back({tr.backend_calls, "action", render_action(action),
                                 nlohmann::json{{"type", "answer"}}});
            if (std::find(labels.begin(), labels.end(), answer->label) != labels.end()) {
                tr.messages = std::move(messages);
                finish(answer->label, false, "");
                return tr;
            }
            std::string allowed;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (i > 0) allowed += ", ";
                allowed += labels[i];
            }
            const std::string feedback = "Error MalformedAction: answer label '" +
                                         answer->label + "' is not one of " + allowed +
                                         ".";
            tr.events.push_back({tr.backend_calls, "tool", feedback,
                                 nlohmann::json{{"error", "MalformedAction"}}});
            messages.push_back({"user", feedback});
            if (++consecutive_malformed >= config.repair_budget) {
                tr.messages = std::move(messages);
                finish(abstention_label(record.task), true, "repair budget exhausted");
                return tr;
            }
            continue;
        }

        consecutive_malformed = 0;
        tr.events.push_back({tr.backend_calls, "action", render_action(action),
                             nlohmann::json{{"type", "act"}}});

        std::string feedback;
        nlohmann::json tool_detail = nlohmann::json::object();
        try {
            if (const auto* premise = std::get_if<ActionPremise>(&action)) {
                const int id = kb.assert_premise(premise->value);
                feedback = render_step(kb.step(id));
                tool_detail["step_id"] = id;
            } else if (const auto* call = std::get_if<ActionCall>(&action)) {
                std::vector<int> ids;
                for (const auto& arg : call->args) {
                    if (const int* id = std::get_if<int>(&arg)) {
                        (void)kb.step(*id);  // throws MissingStep
                        ids.push_back(*id);
                    } else {
                        const RuleValue& value = std::get<RuleValue>(arg);
                        int found = 0;
                        for (const DerivationStep& s : kb.steps()) {
                            if (rule_values_equal(s.content, value)) {
                                found = s.id;
                                break;
                            }
                        }
                        if (found == 0) {
                            throw Error("MissingStep",
                                        "'" + serialize(value) +
                                            "' is not a knowledge-base step; add it "
                                            "with PREMISE first");
                        }
                        ids.push_back(found);
                    }
                }
                const int id = kb.apply_rule(call->rule, ids);
                ++tr.rule_steps;
                feedback = render_step(kb.step(id));
                tool_detail["step_id"] = id;
            } else if (const auto* norm = std::get_if<ActionNormalize>(&action)) {
                const int id = kb.normalize_step(norm->step);
                feedback = render_step(kb.step(id));
                tool_detail["step_id"] = id;
            } else if (const auto* eval = std::get_if<ActionEval>(&action)) {
                const HypothesisReport report =
                    check_hypothesis(kb, eval->value, config.max_domain);
                const std::string verdict = verdict_feedback(report.verdict);
                feedback = "Option " + eval->label + ": " + verdict;
                tool_detail["verdict"] = verdict;
                tool_detail["syntactic"] = report.derived_syntactically;
            }
        } catch (const Error& e) {
            feedback = std::string("Error ") + e.what();
            tool_detail["error"] = e.code();
        }
        tr.events.push_back({tr.backend_calls, "tool", feedback, tool_detail});
        messages.push_back({"user", feedback});
    }

    tr.messages = std::move(messages);
    finish(abstention_label(record.task), true, "step budget exhausted");
    return tr;
}

}  // namespace la
