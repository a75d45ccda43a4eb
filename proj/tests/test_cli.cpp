#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

using std::string;

namespace {

const string kCli = LA_CLI_PATH;
const string kFixtures = LA_FIXTURES_DIR;

struct RunResult {
    int exit_code;
    string output;  // stdout only
};

RunResult run(const string& args) {
    const string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    string output;
    std::array<char, 512> buffer{};
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        output += buffer.data();
    }
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse: prints both syntaxes, exit 0") {
    const RunResult r = run("parse \"P -> Q\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "P -> Q\nImplies(Atom(P), Atom(Q))\n");

    const RunResult c = run("parse --syntax constructor \"Not(Atom(P))\"");
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("~P\n") == 0);
}

TEST_CASE("parse: malformed input exits 2") {
    CHECK(run("parse \"P -> -> Q\"").exit_code == 2);
    CHECK(run("parse").exit_code == 2);
}

TEST_CASE("apply: rule outputs and rule errors") {
    CHECK(run("apply Contrapositive \"P -> Q\"").output == "~Q -> ~P\n");
    CHECK(run("apply Transitive \"P -> Q\" \"Q -> R\"").output == "P -> R\n");
    CHECK(run("apply Contradictory \"A(S,P)=true\"").output == "O(S,P)=false\n");
    CHECK(run("apply Contrary \"A(S,P)=false\"").exit_code == 3);
    CHECK(run("apply Frobnicate \"P\"").exit_code == 3);
}

TEST_CASE("prove: figure 1 verdicts through the cli") {
    CHECK(run("prove -p \"P -> Q\" -p \"P -> R\" \"~Q -> ~P\"").output == "VALID\n");
    CHECK(run("prove -p \"P -> Q\" \"~P -> ~Q\"").output == "UNKNOWN\n");
    CHECK(run("prove -p \"P\" \"~P\"").output == "CONTRADICTED\n");
    CHECK(run("prove -p \"P\" \"~P\"").exit_code == 0);
}

TEST_CASE("agent: appendix A fixture prints B") {
    const RunResult r = run("agent --record " + kFixtures +
                            "/appendix_a.jsonl --task mcrc --backend mock "
                            "--mock-script " +
                            kFixtures + "/mocks/appendix_a_script.jsonl");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "B\n");
}

TEST_CASE("agent: missing fixture path exits 2") {
    CHECK(run("agent --record /nonexistent.jsonl --task mcrc --backend mock "
              "--mock-script " +
              kFixtures + "/mocks/fig1_script.jsonl")
              .exit_code == 2);
}

TEST_CASE("eval: perfect policy prints the expected aggregate") {
    const RunResult csv = run("eval --dataset " + kFixtures +
                              "/tf_synthetic.jsonl --task tf --mode la --backend mock "
                              "--mock-script " +
                              kFixtures + "/mocks/tf_perfect.jsonl --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.find(",la,mock,20,20,1.0000\n") != string::npos);

    const RunResult md = run("eval --dataset " + kFixtures +
                             "/tf_synthetic.jsonl --task tf --mode la --backend mock "
                             "--mock-script " +
                             kFixtures + "/mocks/tf_perfect.jsonl --limit 5");
    CHECK(md.output.find("| 5 | 5 | 100.00 |") != string::npos);
}

TEST_CASE("eval: malformed mock still exits 0 with accuracy 0") {
    const RunResult r = run("eval --dataset " + kFixtures +
                            "/tf_synthetic.jsonl --task tf --mode la --backend mock "
                            "--mock-script " +
                            kFixtures + "/mocks/tf_malformed.jsonl --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find(",20,0,0.0000") != string::npos);
}

TEST_CASE("eval: unknown mode exits 2") {
    CHECK(run("eval --dataset " + kFixtures +
              "/tf_synthetic.jsonl --task tf --mode telepathy --backend mock "
              "--mock-script " +
              kFixtures + "/mocks/tf_perfect.jsonl")
              .exit_code == 2);
}

}  // TEST_SUITE
