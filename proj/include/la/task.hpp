#ifndef LA_TASK_HPP
#define LA_TASK_HPP

#include <string>
#include <utility>
#include <vector>

namespace la {

// One benchmark example in the unified schema. `options` only for mcrc
// (4 or 5 entries, labels within A..E). The optional logic block carries a
// pre-formalized reading in operator syntax for deterministic-parser runs.
struct TaskRecord {
    std::string id;
    std::string task;  // mcrc | nli | tf
    std::string context;
    std::string question;  // question (mcrc/tf) or hypothesis text (nli)
    std::vector<std::pair<std::string, std::string>> options;
    std::string label;  // gold answer

    bool has_logic = false;
    std::vector<std::pair<std::string, std::string>> logic_atoms;  // name -> phrase
    std::vector<std::string> logic_premises;
    std::vector<std::pair<std::string, std::string>> logic_options;  // mcrc
    std::string logic_hypothesis;                                    // nli | tf
};

// Valid answer alphabet for a task ("A".."E", E/C/N, Yes/No).
std::vector<std::string> task_labels(const std::string& task,
                                     const TaskRecord* record = nullptr);

// What an abstaining run answers: mcrc "X", nli "N", tf "No". Always scored
// incorrect regardless of the gold label.
std::string abstention_label(const std::string& task);

}  // namespace la

#endif
