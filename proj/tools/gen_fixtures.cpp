// Regenerates the synthetic oracle-labeled TF fixture and its mock scripts.
// Gold labels are computed with classify_entailment before shipping, so a
// verdict-following policy scores exactly 1.0 on the result.
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "la/formula.hpp"
#include "la/parser.hpp"
#include "la/semantics.hpp"

namespace {

using nlohmann::ordered_json;

struct Shape {
    // Indices into the record's four chained atoms; negated flips both sides.
    int from;
    int to;
    bool negated;
};

// Premises are A->B, B->C, C->D. Forward shapes (optionally contraposed)
// are entailed; reversed ones are not.
constexpr Shape kYesShapes[5] = {
    {0, 2, false}, {2, 0, true}, {0, 3, false}, {3, 1, true}, {1, 3, false}};
constexpr Shape kNoShapes[5] = {
    {2, 0, false}, {0, 2, true}, {3, 0, false}, {1, 3, true}, {3, 1, false}};

std::string holds(const std::string& name) { return "condition " + name + " holds"; }

std::string side_text(const std::string& name, bool negated) {
    return negated ? "condition " + name + " does not hold" : holds(name);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(1);
    }
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic TF fixture and mock scripts"};
    unsigned seed = 42;
    std::string out_dir = "fixtures";
    int count = 20;
    app.add_option("--seed", seed, "RNG seed for hypothesis shape selection");
    app.add_option("--out", out_dir, "Output directory (expects <out>/mocks/)");
    app.add_option("--count", count, "Number of records (even)")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::mt19937 rng(seed);
    std::string dataset;
    std::string perfect_script;

    for (int i = 0; i < count; ++i) {
        const bool want_yes = i % 2 == 0;
        const std::string tag = "P" + std::to_string(i + 1);
        const std::vector<std::string> names = {tag + "A", tag + "B", tag + "C",
                                                tag + "D"};
        const Shape shape = want_yes
                                ? kYesShapes[rng() % 5]
                                : kNoShapes[rng() % 5];

        std::vector<la::Formula> premises;
        std::string context;
        ordered_json premise_texts = ordered_json::array();
        for (int k = 0; k < 3; ++k) {
            premises.push_back(la::implies(la::atom(names[k]), la::atom(names[k + 1])));
            if (k > 0) context += ' ';
            context += "If " + holds(names[k]) + ", then " + holds(names[k + 1]) + ".";
            premise_texts.push_back(la::serialize(premises.back()));
        }

        la::Formula lhs = la::atom(names[shape.from]);
        la::Formula rhs = la::atom(names[shape.to]);
        const la::Formula hypothesis =
            shape.negated ? la::implies(la::neg(lhs), la::neg(rhs))
                          : la::implies(lhs, rhs);
        const std::string question =
            "Does it follow that if " + side_text(names[shape.from], shape.negated) +
            ", then " + side_text(names[shape.to], shape.negated) + "?";

        const la::EntailmentVerdict verdict =
            la::classify_entailment(premises, hypothesis);
        const std::string gold =
            verdict == la::EntailmentVerdict::Valid ? "Yes" : "No";
        if (gold != (want_yes ? "Yes" : "No")) {
            std::cerr << "record " << i << ": oracle disagrees with intended shape\n";
            return 1;
        }

        ordered_json atoms_obj = ordered_json::object();
        for (const std::string& name : names) atoms_obj[name] = holds(name);
        char id[16];
        std::snprintf(id, sizeof(id), "tf-%03d", i + 1);
        ordered_json record;
        record["id"] = id;
        record["task"] = "tf";
        record["context"] = context;
        record["question"] = question;
        record["label"] = gold;
        record["logic"] = {{"atoms", atoms_obj},
                           {"premises", premise_texts},
                           {"hypothesis", la::serialize(hypothesis)}};
        dataset += record.dump();
        dataset += '\n';

        ordered_json entry;
        entry["match"] = "Task:\n" + context;
        entry["response"] = "EVAL H: " + la::serialize(hypothesis);
        perfect_script += entry.dump();
        perfect_script += '\n';
    }

    for (const auto& [verdict, answer] :
         std::vector<std::pair<std::string, std::string>>{
             {"VALID", "Yes"}, {"UNKNOWN", "No"}, {"INVALID", "No"}}) {
        ordered_json entry;
        entry["match"] = "Option H: " + verdict;
        entry["response"] = "ANSWER: " + answer;
        perfect_script += entry.dump();
        perfect_script += '\n';
    }

    std::string always_yes = ordered_json{{"response", "ANSWER: Yes"}}.dump() + "\n";

    std::string malformed;
    for (int i = 0; i < 16; ++i) {
        malformed += ordered_json{{"response",
                                   "The answer is probably somewhere in the text."}}
                         .dump() +
                     "\n";
    }

    write_file(out_dir + "/tf_synthetic.jsonl", dataset);
    write_file(out_dir + "/mocks/tf_perfect.jsonl", perfect_script);
    write_file(out_dir + "/mocks/tf_always_yes.jsonl", always_yes);
    write_file(out_dir + "/mocks/tf_malformed.jsonl", malformed);
    std::cout << "wrote " << count << " records to " << out_dir << "/tf_synthetic.jsonl\n";
    return 0;
}
