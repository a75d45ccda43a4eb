#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "la/agent.hpp"
#include "la/backend.hpp"
#include "la/derivation.hpp"
#include "la/error.hpp"
#include "la/harness.hpp"
#include "la/parser.hpp"
#include "la/prompts.hpp"
#include "la/rules.hpp"

namespace {

// Exit codes are a stable contract: 0 success, 2 usage/parse errors,
// 3 rule-application errors, 4 backend failures.
int exit_code_for(const la::Error& e) {
    static const std::vector<std::string> rule_codes = {
        "NotAnImplication", "MiddleTermMismatch", "NotDeMorganShape", "WrongForm",
        "Undetermined",     "UnknownRule",        "MissingStep",      "ArityMismatch"};
    static const std::vector<std::string> backend_codes = {
        "BackendExhausted", "MockScriptExhausted", "MalformedResponse"};
    for (const auto& code : rule_codes) {
        if (e.code() == code) return 3;
    }
    for (const auto& code : backend_codes) {
        if (e.code() == code) return 4;
    }
    return 2;
}

la::RuleValue parse_any(const std::string& text) {
    if (la::looks_like_statement(text)) return la::parse_statement(text);
    return la::parse_formula(text);
}

struct BackendFlags {
    std::string kind = "mock";
    std::string model;
    std::string mock_script;
    std::string api_base;
    double temperature = 0.0;
    std::string external_model;
    std::string external_mock_script;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& flags) {
    cmd->add_option("--backend", flags.kind, "Backend kind: openai or mock")
        ->check(CLI::IsMember({"openai", "mock"}));
    cmd->add_option("--model", flags.model, "Model name (default: $LA_MODEL)");
    cmd->add_option("--mock-script", flags.mock_script, "Mock script JSONL path");
    cmd->add_option("--api-base", flags.api_base, "API base URL (default: $LA_API_BASE)");
    cmd->add_option("--temperature", flags.temperature, "Sampling temperature")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--external-model", flags.external_model,
                    "Model for the external parser backend");
    cmd->add_option("--external-mock-script", flags.external_mock_script,
                    "Mock script for the external parser backend");
}

std::unique_ptr<la::Backend> build_backend(const BackendFlags& flags) {
    la::BackendConfig config;
    config.kind = flags.kind;
    config.model = flags.model;
    config.temperature = flags.temperature;
    config.base_url = flags.api_base;
    config.mock_script_path = flags.mock_script;
    return la::make_backend(config);
}

std::unique_ptr<la::Backend> build_external_backend(const BackendFlags& flags) {
    if (flags.external_mock_script.empty() && flags.external_model.empty()) {
        return nullptr;
    }
    la::BackendConfig config;
    if (!flags.external_mock_script.empty()) {
        config.kind = "mock";
        config.mock_script_path = flags.external_mock_script;
    } else {
        config.kind = "openai";
        config.model = flags.external_model;
    }
    return la::make_backend(config);
}

const la::Demos& demos_from(const std::string& override_path, la::Demos& storage) {
    if (override_path.empty()) return la::builtin_demos();
    storage = la::load_demos(override_path);
    return storage;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw la::Error("IoError", "cannot write '" + path + "'");
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Logic agent: rule-grounded reasoning kernel and evaluation harness"};
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "Verbose diagnostics on stderr");

    // ---- parse ----
    auto* cmd_parse = app.add_subcommand("parse", "Parse a formula and print both syntaxes");
    std::string parse_expr;
    std::string parse_syntax = "operator";
    cmd_parse->add_option("expr", parse_expr, "Formula text")->required();
    cmd_parse->add_option("--syntax", parse_syntax, "Input syntax")
        ->check(CLI::IsMember({"operator", "constructor"}));

    // ---- apply ----
    auto* cmd_apply = app.add_subcommand("apply", "Apply an inference rule");
    std::string apply_rule_name;
    std::vector<std::string> apply_args;
    cmd_apply->add_option("rule", apply_rule_name, "Rule wire name")->required();
    cmd_apply->add_option("args", apply_args, "Formulas or categorical statements")
        ->required();

    // ---- prove ----
    auto* cmd_prove = app.add_subcommand("prove", "Classify a hypothesis against premises");
    std::vector<std::string> prove_premises;
    std::string prove_hypothesis;
    int prove_max_domain = 3;
    cmd_prove->add_option("-p,--premise", prove_premises, "Premise (repeatable)");
    cmd_prove->add_option("hypothesis", prove_hypothesis, "Hypothesis")->required();
    cmd_prove->add_option("--max-domain", prove_max_domain,
                          "Finite-model check range for categorical content")
        ->check(CLI::Range(1, 4));

    // ---- agent ----
    auto* cmd_agent = app.add_subcommand("agent", "Run the agent loop on one record");
    BackendFlags agent_backend;
    std::string agent_record_path;
    std::string agent_task;
    std::size_t agent_index = 0;
    std::string agent_parser = "deterministic";
    int agent_max_steps = 16;
    int agent_shots = 3;
    std::string agent_out;
    std::string agent_demos_path;
    cmd_agent->add_option("--record", agent_record_path, "Record JSONL path")->required();
    cmd_agent->add_option("--task", agent_task, "Task kind")
        ->required()
        ->check(CLI::IsMember({"mcrc", "nli", "tf"}));
    cmd_agent->add_option("--index", agent_index, "Record index within the file");
    cmd_agent->add_option("--parser", agent_parser, "Logic parser mode")
        ->check(CLI::IsMember({"self", "external", "deterministic"}));
    cmd_agent->add_option("--max-steps", agent_max_steps, "Backend call budget")
        ->check(CLI::PositiveNumber);
    cmd_agent->add_option("--shots", agent_shots, "In-context demonstrations");
    cmd_agent->add_option("--out", agent_out, "Directory for the transcript JSONL");
    cmd_agent->add_option("--demos", agent_demos_path, "Override demos fixture");
    add_backend_flags(cmd_agent, agent_backend);

    // ---- eval ----
    auto* cmd_eval = app.add_subcommand("eval", "Evaluate a dataset");
    BackendFlags eval_backend;
    std::string eval_dataset;
    std::string eval_task;
    std::string eval_mode = "direct";
    std::string eval_parser = "deterministic";
    std::string eval_format = "markdown";
    std::string eval_out;
    std::string eval_demos_path;
    int eval_shots = 3;
    int eval_max_steps = 16;
    int eval_limit = -1;
    int eval_concurrency = 4;
    cmd_eval->add_option("--dataset", eval_dataset, "Dataset JSONL path")->required();
    cmd_eval->add_option("--task", eval_task, "Task kind")
        ->required()
        ->check(CLI::IsMember({"mcrc", "nli", "tf"}));
    cmd_eval->add_option("--mode", eval_mode, "Answering mode")
        ->check(CLI::IsMember({"direct", "cot", "la", "la-ablation"}));
    cmd_eval->add_option("--parser", eval_parser, "Logic parser mode (la)")
        ->check(CLI::IsMember({"self", "external", "deterministic"}));
    cmd_eval->add_option("--format", eval_format, "Report format on stdout")
        ->check(CLI::IsMember({"csv", "markdown"}));
    cmd_eval->add_option("--out", eval_out, "Directory for report files and transcripts");
    cmd_eval->add_option("--demos", eval_demos_path, "Override demos fixture");
    cmd_eval->add_option("--shots", eval_shots, "In-context demonstrations");
    cmd_eval->add_option("--max-steps", eval_max_steps, "Backend call budget per record")
        ->check(CLI::PositiveNumber);
    cmd_eval->add_option("--limit", eval_limit, "Evaluate only the first N records");
    cmd_eval->add_option("--concurrency", eval_concurrency, "Worker pool size")
        ->check(CLI::PositiveNumber);
    add_backend_flags(cmd_eval, eval_backend);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_parse->parsed()) {
            const la::Formula f = parse_syntax == "constructor"
                                      ? la::parse_constructor(parse_expr)
                                      : la::parse_operator(parse_expr);
            std::cout << la::serialize(f, la::Syntax::Operator) << "\n"
                      << la::serialize(f, la::Syntax::Constructor) << "\n";
            return 0;
        }

        if (cmd_apply->parsed()) {
            std::vector<la::RuleValue> inputs;
            inputs.reserve(apply_args.size());
            for (const std::string& arg : apply_args) inputs.push_back(parse_any(arg));
            const la::RuleApplication result = la::apply_rule(apply_rule_name, inputs);
            std::cout << la::serialize(result.output) << "\n";
            if (result.assumption == la::RuleAssumption::ExistentialImport) {
                std::cerr << "assumption: existential import on the subject term\n";
            }
            return 0;
        }

        if (cmd_prove->parsed()) {
            la::KnowledgeBase kb;
            for (const std::string& text : prove_premises) {
                kb.assert_premise(parse_any(text));
            }
            const la::HypothesisReport report =
                la::check_hypothesis(kb, parse_any(prove_hypothesis), prove_max_domain);
            std::cout << la::to_string(report.verdict) << "\n";
            return 0;
        }

        if (cmd_agent->parsed()) {
            const std::vector<la::TaskRecord> records =
                la::load_dataset(agent_record_path, agent_task);
            if (agent_index >= records.size()) {
                throw la::Error("IoError", "record index " + std::to_string(agent_index) +
                                               " out of range (file has " +
                                               std::to_string(records.size()) + ")");
            }
            la::Demos demo_storage;
            const la::Demos& demos = demos_from(agent_demos_path, demo_storage);
            auto backend = build_backend(agent_backend);
            auto external = build_external_backend(agent_backend);
            la::AgentConfig config;
            config.max_steps = agent_max_steps;
            config.shots = agent_shots;
            config.parser_mode = la::parser_mode_from(agent_parser);
            if (verbosity > 0) {
                std::cerr << "agent: record=" << records[agent_index].id
                          << " parser=" << agent_parser
                          << " backend=" << agent_backend.kind
                          << " max-steps=" << config.max_steps << "\n";
            }
            const la::AgentTranscript transcript = la::run_agent(
                records[agent_index], config, *backend, demos, external.get());
            if (!agent_out.empty()) {
                std::filesystem::create_directories(agent_out);
                const std::string path =
                    agent_out + "/" + transcript.task_id + ".jsonl";
                write_file(path, la::transcript_to_jsonl(transcript));
                std::cerr << "transcript: " << path << "\n";
            }
            std::cout << transcript.final_answer << "\n";
            return 0;
        }

        if (cmd_eval->parsed()) {
            la::Demos demo_storage;
            const la::Demos& demos = demos_from(eval_demos_path, demo_storage);
            auto backend = build_backend(eval_backend);
            auto external = build_external_backend(eval_backend);
            la::EvalOptions options;
            options.mode = eval_mode;
            options.shots = eval_shots;
            options.limit = eval_limit;
            options.concurrency = eval_concurrency;
            options.max_steps = eval_max_steps;
            options.parser_mode = la::parser_mode_from(eval_parser);
            if (!eval_out.empty()) options.out_dir = eval_out;
            if (verbosity > 0) {
                std::cerr << "eval: dataset=" << eval_dataset << " task=" << eval_task
                          << " mode=" << eval_mode << " backend=" << eval_backend.kind
                          << " model=" << backend->model_name()
                          << " concurrency=" << options.concurrency << "\n";
            }
            const la::EvalReport report = la::run_eval(eval_dataset, eval_task, options,
                                                       *backend, demos, external.get());
            if (!eval_out.empty()) {
                write_file(eval_out + "/report.csv", la::report_csv(report));
                write_file(eval_out + "/report.md", la::report_markdown(report));
                write_file(eval_out + "/rows.csv", la::rows_csv(report));
            }
            std::cout << la::emit_report(report, eval_format);
            return 0;
        }
    } catch (const la::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const la::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
