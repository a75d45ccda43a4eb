#include "la/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "la/error.hpp"
#include "la/parser.hpp"

namespace la {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema_error(int line, const std::string& field,
                               const std::string& why) {
    throw Error("SchemaError", "line " + std::to_string(line) + ", field '" + field +
                                   "': " + why);
}

std::string require_string(const ordered_json& obj, const char* field, int line) {
    if (!obj.contains(field) || !obj[field].is_string()) {
        schema_error(line, field, "expected a string");
    }
    return obj[field].get<std::string>();
}

void validate_logic_block(TaskRecord& record, const ordered_json& logic, int line) {
    record.has_logic = true;
    if (logic.contains("atoms")) {
        if (!logic["atoms"].is_object()) schema_error(line, "logic.atoms", "expected an object");
        for (const auto& [name, phrase] : logic["atoms"].items()) {
            if (!phrase.is_string()) schema_error(line, "logic.atoms", "phrases must be strings");
            record.logic_atoms.emplace_back(name, phrase.get<std::string>());
        }
    }
    if (!logic.contains("premises") || !logic["premises"].is_array()) {
        schema_error(line, "logic.premises", "expected an array of formulas");
    }
    for (const auto& text : logic["premises"]) {
        if (!text.is_string()) schema_error(line, "logic.premises", "formulas must be strings");
        record.logic_premises.push_back(text.get<std::string>());
    }
    if (logic.contains("options")) {
        if (!logic["options"].is_object()) schema_error(line, "logic.options", "expected an object");
        for (const auto& [label, text] : logic["options"].items()) {
            if (!text.is_string()) schema_error(line, "logic.options", "formulas must be strings");
            record.logic_options.emplace_back(label, text.get<std::string>());
        }
    }
    if (logic.contains("hypothesis")) {
        if (!logic["hypothesis"].is_string()) {
            schema_error(line, "logic.hypothesis", "expected a string");
        }
        record.logic_hypothesis = logic["hypothesis"].get<std::string>();
    }
    // A malformed fixture formula should surface at load time, not mid-run.
    try {
        for (const auto& text : record.logic_premises) {
            if (looks_like_statement(text)) {
                (void)parse_statement(text);
            } else {
                (void)parse_formula(text);
            }
        }
        for (const auto& [label, text] : record.logic_options) {
            if (looks_like_statement(text)) {
                (void)parse_statement(text);
            } else {
                (void)parse_formula(text);
            }
        }
        if (!record.logic_hypothesis.empty()) {
            if (looks_like_statement(record.logic_hypothesis)) {
                (void)parse_statement(record.logic_hypothesis);
            } else {
                (void)parse_formula(record.logic_hypothesis);
            }
        }
    } catch (const Error& e) {
        schema_error(line, "logic", e.what());
    }
}

TaskRecord parse_record(const ordered_json& obj, const std::string& task, int line) {
    TaskRecord record;
    record.id = require_string(obj, "id", line);
    record.task = require_string(obj, "task", line);
    if (record.task != task) {
        schema_error(line, "task", "record task '" + record.task +
                                       "' does not match requested task '" + task + "'");
    }
    record.context = require_string(obj, "context", line);
    record.question = require_string(obj, "question", line);
    record.label = require_string(obj, "label", line);

    if (record.task == "mcrc") {
        if (!obj.contains("options") || !obj["options"].is_object()) {
            schema_error(line, "options", "mcrc records need an options object");
        }
        for (const auto& [label, text] : obj["options"].items()) {
            if (!text.is_string()) schema_error(line, "options", "option texts must be strings");
            if (label.size() != 1 || label[0] < 'A' || label[0] > 'E') {
                schema_error(line, "options", "labels must be within A..E, got '" + label + "'");
            }
            record.options.emplace_back(label, text.get<std::string>());
        }
        if (record.options.size() < 4 || record.options.size() > 5) {
            schema_error(line, "options", "expected 4 or 5 options, got " +
                                              std::to_string(record.options.size()));
        }
        const bool gold_known =
            std::any_of(record.options.begin(), record.options.end(),
                        [&record](const auto& o) { return o.first == record.label; });
        if (!gold_known) {
            schema_error(line, "label", "gold '" + record.label + "' is not an option");
        }
    } else if (record.task == "nli") {
        if (record.label != "E" && record.label != "C" && record.label != "N") {
            schema_error(line, "label", "nli gold must be E, C or N, got '" + record.label + "'");
        }
    } else if (record.task == "tf") {
        if (record.label != "Yes" && record.label != "No") {
            schema_error(line, "label", "tf gold must be Yes or No, got '" + record.label + "'");
        }
    } else {
        schema_error(line, "task", "unknown task '" + record.task + "'");
    }

    if (obj.contains("logic")) {
        if (!obj["logic"].is_object()) schema_error(line, "logic", "expected an object");
        validate_logic_block(record, obj["logic"], line);
    }
    return record;
}

std::string normalize_label(std::string token, const std::string& task) {
    // Strip punctuation hugging the token.
    while (!token.empty() && !std::isalnum(static_cast<unsigned char>(token.front()))) {
        token.erase(token.begin());
    }
    while (!token.empty() && !std::isalnum(static_cast<unsigned char>(token.back()))) {
        token.pop_back();
    }
    if (token.empty()) return "";
    if (task == "tf") {
        std::string lower;
        for (char c : token) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lower == "yes") return "Yes";
        if (lower == "no") return "No";
        return "";
    }
    if (token.size() != 1) return "";
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    const std::vector<std::string> labels = task_labels(task);
    for (const std::string& label : labels) {
        if (label.size() == 1 && label[0] == upper) return label;
    }
    return "";
}

std::string dataset_name(const std::string& path) {
    const std::string suffix = ".jsonl";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

std::string format_accuracy(int correct, int n, int decimals) {
    char buffer[32];
    const double value = n == 0 ? 0.0 : static_cast<double>(correct) / n;
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

std::string format_percent(int correct, int n) {
    char buffer[32];
    const double value = n == 0 ? 0.0 : 100.0 * correct / n;
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

}  // namespace

std::vector<TaskRecord> load_dataset(const std::string& path, const std::string& task) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open dataset '" + path + "'");
    std::vector<TaskRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json obj = ordered_json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            schema_error(line_no, "<record>", "not a JSON object");
        }
        records.push_back(parse_record(obj, task, line_no));
    }
    return records;
}

std::string extract_answer(const std::string& text, const std::string& mode,
                           const std::string& task) {
    if (mode == "direct") {
        std::size_t start = 0;
        while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) {
            ++start;
        }
        std::size_t end = start;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) {
            ++end;
        }
        return normalize_label(text.substr(start, end - start), task);
    }
    // cot / la / la-ablation: the last 'Answer: <label>' line wins.
    std::string found;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i != text.size() && text[i] != '\n') continue;
        std::string line = text.substr(line_start, i - line_start);
        line_start = i + 1;
        std::size_t at = 0;
        while (at < line.size() && std::isspace(static_cast<unsigned char>(line[at]))) ++at;
        static const std::string kPrefix = "answer:";
        if (line.size() - at < kPrefix.size()) continue;
        bool matches = true;
        for (std::size_t k = 0; k < kPrefix.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(line[at + k])) != kPrefix[k]) {
                matches = false;
                break;
            }
        }
        if (!matches) continue;
        const std::string label = normalize_label(line.substr(at + kPrefix.size()), task);
        if (!label.empty()) found = label;
    }
    return found;
}

double exact_match(const std::vector<EvalRow>& rows) {
    if (rows.empty()) throw Error("EmptyInput", "no rows to score");
    const auto correct = std::count_if(rows.begin(), rows.end(), [](const EvalRow& r) {
        return r.correct;
    });
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

namespace {

EvalRow evaluate_record(const TaskRecord& record, const EvalOptions& options,
                        const Backend& backend_proto, const Demos& demos,
                        const Backend* external_proto, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    EvalRow row;
    row.id = record.id;
    row.mode = options.mode;
    row.gold = record.label;

    std::unique_ptr<Backend> backend = backend_proto.clone();
    if (options.mode == "la") {
        AgentConfig config;
        config.max_steps = options.max_steps;
        config.repair_budget = options.repair_budget;
        config.shots = options.shots;
        config.parser_mode = options.parser_mode;
        std::unique_ptr<Backend> external;
        if (external_proto != nullptr) external = external_proto->clone();
        const AgentTranscript transcript =
            run_agent(record, config, *backend, demos, external.get());
        row.prediction = transcript.final_answer;
        row.abstained = transcript.abstained;
        row.steps = transcript.backend_calls;
        if (!out_dir.empty()) {
            std::ofstream out(out_dir + "/" + record.id + ".jsonl");
            out << transcript_to_jsonl(transcript);
        }
    } else {
        std::string prediction;
        std::string reply;
        bool abstained = false;
        std::string failure;
        try {
            const std::vector<ChatMessage> messages =
                build_prompt(record, options.mode, options.shots, demos);
            reply = backend->complete(messages);
            prediction = extract_answer(reply, options.mode, record.task);
            abstained = prediction.empty();
        } catch (const Error& e) {
            abstained = true;
            failure = e.what();
        }
        row.prediction = abstained ? abstention_label(record.task) : prediction;
        row.abstained = abstained;
        row.steps = 1;
        if (!out_dir.empty()) {
            AgentTranscript transcript;
            transcript.task_id = record.id;
            if (!reply.empty()) {
                transcript.events.push_back(
                    {1, "llm", reply, nlohmann::json{{"phase", options.mode}}});
            }
            nlohmann::json detail{{"abstained", abstained}};
            if (!failure.empty()) detail["reason"] = failure;
            transcript.events.push_back({1, "final", row.prediction, std::move(detail)});
            std::ofstream out(out_dir + "/" + record.id + ".jsonl");
            out << transcript_to_jsonl(transcript);
        }
    }
    row.correct = !row.abstained && row.prediction == row.gold;
    row.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

EvalReport run_eval(const std::string& dataset_path, const std::string& task,
                    const EvalOptions& options, const Backend& backend,
                    const Demos& demos, const Backend* external_parser) {
    std::vector<TaskRecord> records = load_dataset(dataset_path, task);
    if (options.limit >= 0 && static_cast<std::size_t>(options.limit) < records.size()) {
        records.resize(static_cast<std::size_t>(options.limit));
    }
    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
    }

    EvalReport report;
    report.rows.resize(records.size());
    const int workers = std::max(1, std::min<int>(options.concurrency,
                                                  static_cast<int>(records.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            report.rows[i] = evaluate_record(records[i], options, backend, demos,
                                             external_parser, options.out_dir);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    report.aggregate.dataset = dataset_name(dataset_path);
    report.aggregate.mode = options.mode;
    report.aggregate.model = backend.model_name();
    report.aggregate.n = static_cast<int>(report.rows.size());
    report.aggregate.correct = static_cast<int>(
        std::count_if(report.rows.begin(), report.rows.end(),
                      [](const EvalRow& r) { return r.correct; }));
    return report;
}

std::string report_csv(const EvalReport& report) {
    std::string out = "dataset,mode,model,n,correct,accuracy\n";
    const EvalAggregate& a = report.aggregate;
    if (a.n > 0 || !a.dataset.empty()) {
        out += a.dataset + ',' + a.mode + ',' + a.model + ',' + std::to_string(a.n) +
               ',' + std::to_string(a.correct) + ',' +
               format_accuracy(a.correct, a.n, 4) + '\n';
    }
    return out;
}

std::string report_markdown(const EvalReport& report) {
    std::string out =
        "| Dataset | Mode | Model | n | Correct | Accuracy (%) |\n"
        "|---|---|---|---|---|---|\n";
    const EvalAggregate& a = report.aggregate;
    if (a.n > 0 || !a.dataset.empty()) {
        out += "| " + a.dataset + " | " + a.mode + " | " + a.model + " | " +
               std::to_string(a.n) + " | " + std::to_string(a.correct) + " | " +
               format_percent(a.correct, a.n) + " |\n";
    }
    return out;
}

std::string emit_report(const EvalReport& report, const std::string& format) {
    if (format == "csv") return report_csv(report);
    if (format == "markdown") return report_markdown(report);
    throw Error("UnknownMode", "unknown report format '" + format + "'");
}

std::string rows_csv(const EvalReport& report) {
    std::string out = "id,mode,prediction,gold,correct,abstained,steps\n";
    for (const EvalRow& row : report.rows) {
        out += row.id + ',' + row.mode + ',' + row.prediction + ',' + row.gold + ',' +
               (row.correct ? "true" : "false") + ',' +
               (row.abstained ? "true" : "false") + ',' + std::to_string(row.steps) +
               '\n';
    }
    return out;
}

}  // namespace la
