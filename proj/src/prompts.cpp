#include "la/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "la/error.hpp"
#include "prompts_data.hpp"

namespace la {

namespace {

using nlohmann::ordered_json;

std::vector<AnswerDemo> read_answer_demos(const ordered_json& list, bool with_reasoning) {
    std::vector<AnswerDemo> out;
    for (const auto& item : list) {
        AnswerDemo demo;
        demo.input = item.at("input").get<std::string>();
        if (with_reasoning) demo.reasoning = item.at("reasoning").get<std::string>();
        demo.answer = item.at("answer").get<std::string>();
        out.push_back(std::move(demo));
    }
    return out;
}

std::string join_labels(const std::vector<std::string>& labels, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) out += sep;
        out += labels[i];
    }
    return out;
}

std::string direct_system(const std::string& task) {
    return "You are answering logical reasoning questions. Reply with only the "
           "answer label as the first token of your reply: one of " +
           join_labels(task_labels(task), ", ") + ".";
}

std::string cot_system(const std::string& task) {
    return "You are answering logical reasoning questions. Think step by step, "
           "then give your final answer on the last line as 'Answer: <label>' "
           "with the label one of " +
           join_labels(task_labels(task), ", ") + ".";
}

std::string ablation_system(const std::string& task) {
    return "You are answering logical reasoning questions. Each problem is "
           "followed by a formal logic reading of its content. Answer directly, "
           "without working through intermediate steps, as 'Answer: <label>' "
           "with the label one of " +
           join_labels(task_labels(task), ", ") + ".";
}

std::string la_system(const std::string& task) {
    return "You are a logic agent. You reason by invoking inference rules over a "
           "knowledge base of numbered steps. End every reply with exactly one "
           "action line in one of these forms:\n"
           "PREMISE: <formula>\n"
           "CALL <RuleName>(<step id or formula>[, ...])\n"
           "NORMALIZE <step id>\n"
           "EVAL <label>: <formula>\n"
           "ANSWER: <label>\n"
           "Available rules: Contrapositive(implication), Transitive(implication, "
           "implication), De_Morgans(formula), Contradictory(statement), "
           "Contrary(statement), Subcontrary(statement), "
           "Subalternation_forward(statement), Subalternation_backward(statement).\n"
           "Formulas use operator syntax (~ & | -> <->), constructor syntax "
           "(Implies(Atom(P), Atom(Q))), or categorical statements like "
           "A(S,P)=true. Each action receives tool feedback; EVAL reports VALID, "
           "INVALID, or UNKNOWN for the formula you supply. Finish with "
           "'ANSWER: <label>', one of " +
           join_labels(task_labels(task), ", ") + ".";
}

std::string parse_system() {
    return "You translate logical reasoning problems into logic forms. Emit one "
           "line per item and nothing else:\n"
           "ATOM <name>: <short phrase>\n"
           "PREMISE: <formula>\n"
           "OPTION <label>: <formula>   (one per option of a multiple-choice "
           "problem)\n"
           "HYPOTHESIS: <formula>   (for entailment and yes/no problems)\n"
           "Formulas use operator syntax over the declared atoms (~ & | -> <->) "
           "or categorical statements like A(S,P)=true.";
}

}  // namespace

const std::vector<AnswerDemo>& Demos::answer_demos(const std::string& mode,
                                                   const std::string& task) const {
    const bool cot = mode == "cot";
    if (task == "mcrc") return cot ? cot_mcrc : direct_mcrc;
    if (task == "nli") return cot ? cot_nli : direct_nli;
    return cot ? cot_tf : direct_tf;
}

Demos parse_demos(const std::string& json_text, const std::string& origin) {
    ordered_json root = ordered_json::parse(json_text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw Error("IoError", "demos file '" + origin + "' is not valid JSON");
    }
    Demos demos;
    demos.version = root.at("version").get<int>();
    demos.direct_mcrc = read_answer_demos(root.at("direct").at("mcrc"), false);
    demos.direct_nli = read_answer_demos(root.at("direct").at("nli"), false);
    demos.direct_tf = read_answer_demos(root.at("direct").at("tf"), false);
    demos.cot_mcrc = read_answer_demos(root.at("cot").at("mcrc"), true);
    demos.cot_nli = read_answer_demos(root.at("cot").at("nli"), true);
    demos.cot_tf = read_answer_demos(root.at("cot").at("tf"), true);
    for (const auto& item : root.at("la")) {
        AgentDemo demo;
        demo.input = item.at("input").get<std::string>();
        for (const auto& step : item.at("steps")) {
            DemoStep s;
            s.act = step.at("act").get<std::string>();
            if (step.contains("obs")) s.obs = step.at("obs").get<std::string>();
            demo.steps.push_back(std::move(s));
        }
        demos.agent.push_back(std::move(demo));
    }
    for (const auto& item : root.at("parse")) {
        demos.parse.push_back({item.at("input").get<std::string>(),
                               item.at("output").get<std::string>()});
    }
    return demos;
}

const Demos& builtin_demos() {
    static const Demos demos = parse_demos(detail::kEmbeddedDemos, "<builtin>");
    return demos;
}

Demos load_demos(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open demos file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_demos(buffer.str(), path);
}

std::vector<std::string> task_labels(const std::string& task, const TaskRecord* record) {
    if (task == "mcrc") {
        if (record != nullptr && !record->options.empty()) {
            std::vector<std::string> labels;
            labels.reserve(record->options.size());
            for (const auto& [label, text] : record->options) labels.push_back(label);
            return labels;
        }
        return {"A", "B", "C", "D", "E"};
    }
    if (task == "nli") return {"E", "C", "N"};
    if (task == "tf") return {"Yes", "No"};
    throw Error("UnknownMode", "unknown task '" + task + "'");
}

std::string abstention_label(const std::string& task) {
    if (task == "mcrc") return "X";
    if (task == "nli") return "N";
    return "No";
}

std::string format_record_text(const TaskRecord& record) {
    if (record.task == "mcrc") {
        std::string out = "Context:\n" + record.context + "\n\nQuestion:\n" +
                          record.question + "\n\nOptions:\n";
        for (const auto& [label, text] : record.options) {
            out += label + ". " + text + "\n";
        }
        out.pop_back();
        return out;
    }
    if (record.task == "nli") {
        return "Premise: " + record.context + "\nHypothesis: " + record.question;
    }
    return record.context + "\n" + record.question;
}

std::string logic_block_text(const TaskRecord& record) {
    if (!record.has_logic) return "";
    std::string out = "Atoms:\n";
    for (const auto& [name, phrase] : record.logic_atoms) {
        out += name + ": " + phrase + "\n";
    }
    out += "\nPremises:\n";
    for (const auto& premise : record.logic_premises) {
        out += premise + "\n";
    }
    if (!record.logic_options.empty()) {
        out += "\nTargets:\n";
        for (const auto& [label, formula] : record.logic_options) {
            out += label + ": " + formula + "\n";
        }
    } else if (!record.logic_hypothesis.empty()) {
        out += "\nTargets:\nH: " + record.logic_hypothesis + "\n";
    }
    out.pop_back();
    return out;
}

std::string agent_presentation(const TaskRecord& record, const std::string& atoms_block,
                               const std::string& premises_block,
                               const std::string& targets_block) {
    std::string out = "Task:\n" + format_record_text(record) + "\n\n";
    out += "Atoms:\n" + atoms_block + "\n\n";
    out += "Premises:\n" + premises_block + "\n\n";
    out += "Targets:\n" + targets_block + "\n\n";
    out += "Respond with exactly one action line.";
    return out;
}

std::vector<ChatMessage> agent_prelude(const TaskRecord& record, int shots,
                                       const Demos& demos) {
    std::vector<ChatMessage> messages;
    messages.push_back({"system", la_system(record.task)});
    const auto count = std::min<std::size_t>(demos.agent.size(),
                                             shots < 0 ? 0 : static_cast<std::size_t>(shots));
    for (std::size_t i = 0; i < count; ++i) {
        const AgentDemo& demo = demos.agent[i];
        messages.push_back({"user", demo.input});
        for (const DemoStep& step : demo.steps) {
            messages.push_back({"assistant", step.act});
            if (!step.obs.empty()) messages.push_back({"user", step.obs});
        }
    }
    return messages;
}

std::vector<ChatMessage> build_parse_prompt(const TaskRecord& record, int shots,
                                            const Demos& demos) {
    std::vector<ChatMessage> messages;
    messages.push_back({"system", parse_system()});
    const auto count = std::min<std::size_t>(demos.parse.size(),
                                             shots < 0 ? 0 : static_cast<std::size_t>(shots));
    for (std::size_t i = 0; i < count; ++i) {
        messages.push_back({"user", demos.parse[i].input});
        messages.push_back({"assistant", demos.parse[i].output});
    }
    messages.push_back({"user", format_record_text(record)});
    return messages;
}

std::vector<ChatMessage> build_prompt(const TaskRecord& record, const std::string& mode,
                                      int shots, const Demos& demos) {
    if (mode == "la") {
        std::vector<ChatMessage> messages = agent_prelude(record, shots, demos);
        std::string atoms_block;
        std::string premises_block;
        std::string targets_block;
        if (record.has_logic) {
            for (const auto& [name, phrase] : record.logic_atoms) {
                atoms_block += name + ": " + phrase + "\n";
            }
            int id = 0;
            for (const auto& premise : record.logic_premises) {
                premises_block += "[" + std::to_string(++id) + "] " + premise + "\n";
            }
            for (const auto& [label, formula] : record.logic_options) {
                targets_block += label + ": " + formula + "\n";
            }
            if (targets_block.empty() && !record.logic_hypothesis.empty()) {
                targets_block = "H: " + record.logic_hypothesis + "\n";
            }
        }
        auto chomp = [](std::string& s) {
            if (!s.empty()) s.pop_back();
        };
        chomp(atoms_block);
        chomp(premises_block);
        chomp(targets_block);
        messages.push_back(
            {"user", agent_presentation(record, atoms_block, premises_block,
                                        targets_block)});
        return messages;
    }
    if (mode != "direct" && mode != "cot" && mode != "la-ablation") {
        throw Error("UnknownMode", "unknown answering mode '" + mode + "'");
    }

    const bool cot = mode == "cot";
    const bool ablation = mode == "la-ablation";
    std::vector<ChatMessage> messages;
    if (cot) {
        messages.push_back({"system", cot_system(record.task)});
    } else if (ablation) {
        messages.push_back({"system", ablation_system(record.task)});
    } else {
        messages.push_back({"system", direct_system(record.task)});
    }
    const auto& demo_list = demos.answer_demos(cot ? "cot" : "direct", record.task);
    const auto count = std::min<std::size_t>(demo_list.size(),
                                             shots < 0 ? 0 : static_cast<std::size_t>(shots));
    const char* direct_cue = "\n\nAnswer with only the label.";
    for (std::size_t i = 0; i < count; ++i) {
        const AnswerDemo& demo = demo_list[i];
        std::string input = demo.input;
        if (cot) input += "\n\nLet's think step by step.";
        if (mode == "direct") input += direct_cue;
        messages.push_back({"user", input});
        std::string reply = demo.answer;
        if (cot) {
            reply = demo.reasoning + "\nAnswer: " + demo.answer;
        } else if (ablation) {
            reply = "Answer: " + demo.answer;
        }
        messages.push_back({"assistant", std::move(reply)});
    }
    std::string input = format_record_text(record);
    if (ablation) {
        const std::string block = logic_block_text(record);
        if (!block.empty()) input += "\n\n" + block;
    }
    if (cot) input += "\n\nLet's think step by step.";
    if (mode == "direct") input += direct_cue;
    messages.push_back({"user", input});
    return messages;
}

}  // namespace la
