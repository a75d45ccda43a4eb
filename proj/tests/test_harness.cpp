#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "la/error.hpp"
#include "la/harness.hpp"
#include "la/parser.hpp"
#include "la/semantics.hpp"
#include "golden.hpp"

using namespace la;

namespace {

const std::string kFixtures = LA_FIXTURES_DIR;

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::unique_ptr<Backend> mock_from(const std::string& relative) {
    return make_mock_backend(load_mock_script(kFixtures + "/" + relative));
}

EvalOptions la_options() {
    EvalOptions options;
    options.mode = "la";
    options.concurrency = 2;
    return options;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("load_dataset: valid files load in order") {
    const std::string path = write_temp(
        "la_mcrc.jsonl",
        R"({"id":"m1","task":"mcrc","context":"c","question":"q","options":{"A":"a","B":"b","C":"c","D":"d"},"label":"B"})"
        "\n"
        R"({"id":"m2","task":"mcrc","context":"c","question":"q","options":{"A":"a","B":"b","C":"c","D":"d","E":"e"},"label":"E"})"
        "\n");
    const std::vector<TaskRecord> records = load_dataset(path, "mcrc");
    REQUIRE(records.size() == 2);
    CHECK(records[0].id == "m1");
    CHECK(records[1].options.size() == 5);
}

TEST_CASE("load_dataset: schema violations carry line numbers") {
    const std::string bad_gold = write_temp(
        "la_badgold.jsonl",
        "\n" R"({"id":"n1","task":"nli","context":"c","question":"h","label":"Maybe"})" "\n");
    try {
        (void)load_dataset(bad_gold, "nli");
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == "SchemaError");
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const std::string wrong_task = write_temp(
        "la_wrongtask.jsonl",
        R"({"id":"t1","task":"tf","context":"c","question":"q","label":"Yes"})" "\n");
    CHECK_THROWS_AS((void)load_dataset(wrong_task, "nli"), Error);

    const std::string bad_logic = write_temp(
        "la_badlogic.jsonl",
        R"({"id":"t1","task":"tf","context":"c","question":"q","label":"Yes","logic":{"premises":["P -> -> Q"],"hypothesis":"P"}})" "\n");
    CHECK_THROWS_AS((void)load_dataset(bad_logic, "tf"), Error);

    CHECK_THROWS_WITH_AS((void)load_dataset("/nonexistent.jsonl", "tf"),
                         doctest::Contains("IoError"), Error);
}

TEST_CASE("bundled synthetic fixture: gold labels equal the oracle verdicts") {
    const std::vector<TaskRecord> records =
        load_dataset(kFixtures + "/tf_synthetic.jsonl", "tf");
    REQUIRE(records.size() == 20);
    int yes = 0;
    for (const TaskRecord& record : records) {
        REQUIRE(record.has_logic);
        std::vector<Formula> premises;
        for (const std::string& text : record.logic_premises) {
            premises.push_back(parse_operator(text));
        }
        const EntailmentVerdict verdict =
            classify_entailment(premises, parse_operator(record.logic_hypothesis));
        const std::string expect =
            verdict == EntailmentVerdict::Valid ? "Yes" : "No";
        CHECK(record.label == expect);
        if (record.label == "Yes") ++yes;
    }
    CHECK(yes == 10);
}

TEST_CASE("build_prompt: mcrc direct ends with the options block and instruction") {
    const TaskRecord record = load_dataset(kFixtures + "/fig1_mcrc.jsonl", "mcrc")[0];
    const std::vector<ChatMessage> messages =
        build_prompt(record, "direct", 3, builtin_demos());
    REQUIRE(messages.size() == 8);  // system + 3 demo pairs + record
    CHECK(messages.front().role == "system");
    CHECK(messages.front().content.find("first token") != std::string::npos);
    const std::string& last = messages.back().content;
    CHECK(last.rfind("Context:\n", 0) == 0);
    // The record text ends with the options block followed by the
    // answer-first instruction.
    const std::string tail = "\n\nAnswer with only the label.";
    REQUIRE(last.size() > tail.size());
    CHECK(last.compare(last.size() - tail.size(), tail.size(), tail) == 0);
    const std::size_t options_at = last.find("Options:\nA. ");
    REQUIRE(options_at != std::string::npos);
    CHECK(options_at < last.size() - tail.size());
}

TEST_CASE("build_prompt: nli records use Premise:/Hypothesis: identifiers") {
    TaskRecord record;
    record.id = "n";
    record.task = "nli";
    record.context = "All trains stop here.";
    record.question = "Some trains stop here.";
    record.label = "E";
    const std::vector<ChatMessage> messages =
        build_prompt(record, "direct", 3, builtin_demos());
    const std::string& last = messages.back().content;
    CHECK(last.find("Premise: All trains stop here.") != std::string::npos);
    CHECK(last.find("Hypothesis: Some trains stop here.") != std::string::npos);
}

TEST_CASE("build_prompt: cot appends the step-by-step cue and answer contract") {
    const TaskRecord record = load_dataset(kFixtures + "/tf_synthetic.jsonl", "tf")[0];
    const std::vector<ChatMessage> messages =
        build_prompt(record, "cot", 3, builtin_demos());
    CHECK(messages.back().content.find("Let's think step by step.") != std::string::npos);
    CHECK(messages.front().content.find("Answer: <label>") != std::string::npos);
    // Demo completions end with the required answer line.
    CHECK(messages[2].content.find("\nAnswer: ") != std::string::npos);
}

TEST_CASE("build_prompt: la-ablation includes the logic block, no action grammar") {
    const TaskRecord record = load_dataset(kFixtures + "/tf_synthetic.jsonl", "tf")[0];
    const std::vector<ChatMessage> messages =
        build_prompt(record, "la-ablation", 3, builtin_demos());
    std::string all;
    for (const ChatMessage& m : messages) all += m.role + ":\n" + m.content + "\n---\n";
    CHECK(all.find("Atoms:") != std::string::npos);
    CHECK(all.find("P1A -> P1B") != std::string::npos);
    CHECK(all.find("CALL") == std::string::npos);
    CHECK(all.find("EVAL") == std::string::npos);
    CHECK(all.find("NORMALIZE") == std::string::npos);
    CHECK(testing::golden_matches(kFixtures + "/golden/prompt_tf_la_ablation.txt", all));
}

TEST_CASE("build_prompt: pure function of record, mode and shots") {
    const TaskRecord record = load_dataset(kFixtures + "/fig1_mcrc.jsonl", "mcrc")[0];
    for (const char* mode : {"direct", "cot", "la-ablation", "la"}) {
        const auto a = build_prompt(record, mode, 3, builtin_demos());
        const auto b = build_prompt(record, mode, 3, builtin_demos());
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].content == b[i].content);
        }
    }
    CHECK(build_prompt(record, "direct", 1, builtin_demos()).size() == 4);
    CHECK_THROWS_WITH_AS((void)build_prompt(record, "bogus", 3, builtin_demos()),
                         doctest::Contains("UnknownMode"), Error);
}

TEST_CASE("extract_answer: direct takes the normalized first token") {
    CHECK(extract_answer("B. Because the contrapositive holds.", "direct", "mcrc") == "B");
    CHECK(extract_answer("  e", "direct", "nli") == "E");
    CHECK(extract_answer("yes, clearly", "direct", "tf") == "Yes");
    CHECK(extract_answer("Perhaps", "direct", "tf").empty());
    CHECK(extract_answer("F", "direct", "mcrc").empty());
}

TEST_CASE("extract_answer: cot takes the last Answer line") {
    CHECK(extract_answer("step one...\ntherefore.\nAnswer: C", "cot", "mcrc") == "C");
    CHECK(extract_answer("Answer: A\nwait, no.\nanswer: b.", "cot", "mcrc") == "B");
    CHECK(extract_answer("I cannot decide.", "cot", "mcrc").empty());
    CHECK(extract_answer("Answer: maybe", "cot", "tf").empty());
}

TEST_CASE("exact_match: abstentions always score incorrect") {
    std::vector<EvalRow> rows(10);
    for (int i = 0; i < 10; ++i) {
        rows[i].gold = "Yes";
        rows[i].prediction = i < 7 ? "Yes" : "No";
        rows[i].correct = i < 7;
    }
    CHECK(exact_match(rows) == doctest::Approx(0.7));

    // An abstention whose recorded label equals gold still scores zero.
    std::vector<EvalRow> abstained(2);
    abstained[0].gold = "No";
    abstained[0].prediction = "No";
    abstained[0].abstained = true;
    abstained[0].correct = false;
    abstained[1].gold = "No";
    abstained[1].prediction = "No";
    abstained[1].correct = true;
    CHECK(exact_match(abstained) == doctest::Approx(0.5));

    CHECK_THROWS_WITH_AS((void)exact_match({}), doctest::Contains("EmptyInput"), Error);
}

TEST_CASE("scoring is order-independent") {
    std::vector<EvalRow> rows(9);
    for (int i = 0; i < 9; ++i) {
        rows[i].gold = "Yes";
        rows[i].prediction = i % 3 == 0 ? "Yes" : "No";
        rows[i].correct = i % 3 == 0;
    }
    const double before = exact_match(rows);
    std::shuffle(rows.begin(), rows.end(), std::mt19937{17});
    CHECK(exact_match(rows) == before);
}

TEST_CASE("run_eval: perfect policy scores 1.0, constant yes scores 0.5") {
    const auto perfect = mock_from("mocks/tf_perfect.jsonl");
    const EvalReport report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                       la_options(), *perfect, builtin_demos());
    CHECK(report.aggregate.n == 20);
    CHECK(report.aggregate.correct == 20);
    CHECK(report_csv(report) ==
          "dataset,mode,model,n,correct,accuracy\n" +
              kFixtures + "/tf_synthetic,la,mock,20,20,1.0000\n");

    const auto yes = mock_from("mocks/tf_always_yes.jsonl");
    const EvalReport half = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                     la_options(), *yes, builtin_demos());
    CHECK(half.aggregate.correct == 10);
    CHECK(report_csv(half).find(",20,10,0.5000") != std::string::npos);
    for (const EvalRow& row : half.rows) CHECK_FALSE(row.abstained);
}

TEST_CASE("run_eval: limit and order preservation") {
    const auto perfect = mock_from("mocks/tf_perfect.jsonl");
    EvalOptions options = la_options();
    options.limit = 5;
    const EvalReport report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf", options,
                                       *perfect, builtin_demos());
    CHECK(report.aggregate.n == 5);
    REQUIRE(report.rows.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(report.rows[i].id == "tf-00" + std::to_string(i + 1));
    }
}

TEST_CASE("run_eval: malformed mock abstains everywhere, accuracy 0") {
    const auto malformed = mock_from("mocks/tf_malformed.jsonl");
    const EvalReport report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                       la_options(), *malformed, builtin_demos());
    CHECK(report.aggregate.correct == 0);
    for (const EvalRow& row : report.rows) {
        CHECK(row.abstained);
        CHECK(row.steps <= 16);
    }
}

TEST_CASE("run_eval: deterministic end to end with the mock backend") {
    const auto perfect = mock_from("mocks/tf_perfect.jsonl");
    EvalOptions options = la_options();
    options.out_dir = "/tmp/la_eval_a";
    const EvalReport a = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf", options,
                                  *perfect, builtin_demos());
    options.out_dir = "/tmp/la_eval_b";
    const EvalReport b = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf", options,
                                  *perfect, builtin_demos());
    CHECK(report_csv(a) == report_csv(b));
    CHECK(rows_csv(a) == rows_csv(b));
    CHECK(testing::read_file("/tmp/la_eval_a/tf-007.jsonl") ==
          testing::read_file("/tmp/la_eval_b/tf-007.jsonl"));
    CHECK_FALSE(testing::read_file("/tmp/la_eval_a/tf-007.jsonl").empty());
}

TEST_CASE("run_eval: single-completion modes score extracted answers") {
    // Direct mode: the first token is the answer; per-record clones mean
    // every record sees the same scripted reply.
    const auto yes_token = make_mock_backend({{"", "Yes"}});
    EvalOptions direct;
    direct.mode = "direct";
    const EvalReport direct_report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                              direct, *yes_token, builtin_demos());
    CHECK(direct_report.aggregate.correct == 10);
    for (const EvalRow& row : direct_report.rows) {
        CHECK(row.steps == 1);
        CHECK_FALSE(row.abstained);
    }

    // CoT mode: the final Answer line is extracted.
    const auto cot_reply =
        make_mock_backend({{"", "The chain gives the consequent.\nAnswer: No"}});
    EvalOptions cot;
    cot.mode = "cot";
    const EvalReport cot_report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf", cot,
                                           *cot_reply, builtin_demos());
    CHECK(cot_report.aggregate.correct == 10);

    // A reply with no extractable answer abstains and scores zero.
    const auto mute = make_mock_backend({{"", "I cannot decide."}});
    const EvalReport mute_report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf", cot,
                                            *mute, builtin_demos());
    CHECK(mute_report.aggregate.correct == 0);
    for (const EvalRow& row : mute_report.rows) {
        CHECK(row.abstained);
        CHECK(row.prediction == "No");  // recorded abstention label, never scored
    }

    // la-ablation is a single completion against the augmented prompt.
    const auto ablation_reply = make_mock_backend({{"", "Answer: Yes"}});
    EvalOptions ablation;
    ablation.mode = "la-ablation";
    const EvalReport ablation_report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                                ablation, *ablation_reply,
                                                builtin_demos());
    CHECK(ablation_report.aggregate.correct == 10);
    for (const EvalRow& row : ablation_report.rows) CHECK(row.steps == 1);
}

TEST_CASE("emit_report: formats") {
    EvalReport report;
    report.aggregate = {"fixtures/tf_synthetic", "la", "mock", 20, 20};
    CHECK(emit_report(report, "csv") ==
          "dataset,mode,model,n,correct,accuracy\n"
          "fixtures/tf_synthetic,la,mock,20,20,1.0000\n");
    CHECK(emit_report(report, "markdown").find("| 100.00 |") != std::string::npos);

    EvalReport seventy;
    seventy.aggregate = {"d", "cot", "m", 10, 7};
    CHECK(emit_report(seventy, "csv").find(",10,7,0.7000") != std::string::npos);
    CHECK(emit_report(seventy, "markdown").find("| 70.00 |") != std::string::npos);

    const EvalReport empty;
    CHECK(emit_report(empty, "csv") == "dataset,mode,model,n,correct,accuracy\n");
    CHECK_THROWS_WITH_AS((void)emit_report(empty, "yaml"),
                         doctest::Contains("UnknownMode"), Error);
}

TEST_CASE("aggregate bookkeeping: accuracy times n equals correct") {
    const auto yes = mock_from("mocks/tf_always_yes.jsonl");
    const EvalReport report = run_eval(kFixtures + "/tf_synthetic.jsonl", "tf",
                                       la_options(), *yes, builtin_demos());
    CHECK(exact_match(report.rows) * report.aggregate.n ==
          doctest::Approx(report.aggregate.correct));
}

}  // TEST_SUITE
