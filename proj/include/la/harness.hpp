#ifndef LA_HARNESS_HPP
#define LA_HARNESS_HPP

#include <string>
#include <vector>

#include "la/agent.hpp"
#include "la/backend.hpp"
#include "la/prompts.hpp"
#include "la/task.hpp"

namespace la {

// Reads and validates a JSONL dataset. Invariant violations carry the
// 1-based line number: Error{"SchemaError"} / Error{"IoError"}.
std::vector<TaskRecord> load_dataset(const std::string& path, const std::string& task);

// Answer extraction. Direct mode takes the first token, normalized to the
// task's label alphabet; cot/la/la-ablation take the last line matching
// 'Answer: <label>' case-insensitively. Returns "" for abstention.
std::string extract_answer(const std::string& text, const std::string& mode,
                           const std::string& task);

struct EvalRow {
    std::string id;
    std::string mode;
    std::string prediction;
    std::string gold;
    bool correct = false;
    bool abstained = false;
    int steps = 0;
    double duration_s = 0.0;  // in-memory only; never serialized
};

struct EvalAggregate {
    std::string dataset;
    std::string mode;
    std::string model;
    int n = 0;
    int correct = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    EvalAggregate aggregate;
};

// Exact-match accuracy; abstentions count as incorrect (their recorded
// prediction never scores, even when it happens to equal the gold label).
// Throws Error{"EmptyInput"}.
double exact_match(const std::vector<EvalRow>& rows);

struct EvalOptions {
    std::string mode = "direct";  // direct | cot | la | la-ablation
    int shots = 3;
    int limit = -1;  // <0: all records
    int concurrency = 4;
    int max_steps = 16;
    int repair_budget = 3;
    ParserMode parser_mode = ParserMode::Deterministic;
    std::string out_dir;  // when set: report.csv/report.md/rows.csv + transcripts
};

// Runs every record under the mode with a bounded worker pool, preserving
// input order in the report. Per-record failures become abstentions; only
// dataset/config errors abort the run. The backend is cloned per record so
// mock cursors are never shared.
EvalReport run_eval(const std::string& dataset_path, const std::string& task,
                    const EvalOptions& options, const Backend& backend,
                    const Demos& demos, const Backend* external_parser = nullptr);

// csv columns exactly: dataset,mode,model,n,correct,accuracy (4 decimals).
std::string report_csv(const EvalReport& report);
// One markdown row per aggregate, accuracy in percent to 2 decimals.
std::string report_markdown(const EvalReport& report);
// format: csv | markdown. Throws Error{"UnknownMode"}.
std::string emit_report(const EvalReport& report, const std::string& format);

// Per-row csv (id,mode,prediction,gold,correct,abstained,steps).
std::string rows_csv(const EvalReport& report);

}  // namespace la

#endif
