#include <doctest.h>

#include "la/error.hpp"
#include "la/parser.hpp"
#include "random_formula.hpp"

using namespace la;

namespace {

// Rewrites the ASCII rendering into its Unicode-glyph equivalent.
std::string unicodeize(std::string text) {
    auto replace_all = [&text](const std::string& from, const std::string& to) {
        std::size_t at = 0;
        while ((at = text.find(from, at)) != std::string::npos) {
            text.replace(at, from.size(), to);
            at += to.size();
        }
    };
    replace_all("<->", "↔");
    replace_all("->", "→");
    replace_all("&", "∧");
    replace_all("|", "∨");
    replace_all("~", "¬");
    replace_all("forall ", "∀");
    replace_all("exists ", "∃");
    return text;
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("operator syntax: figure-style inputs") {
    CHECK(parse_operator("~Q -> ~P") == implies(neg(atom("Q")), neg(atom("P"))));
    CHECK(parse_operator("P -> Q -> R") ==
          implies(atom("P"), implies(atom("Q"), atom("R"))));
    CHECK(parse_operator("forall x. S(x) -> P(x)") ==
          forall("x", implies(pred("S", "x"), pred("P", "x"))));
    CHECK(parse_operator("P & Q | R") ==
          disj({conj({atom("P"), atom("Q")}), atom("R")}));
}

TEST_CASE("operator syntax: precedence and associativity corners") {
    CHECK(parse_operator("P <-> Q <-> R") ==
          equiv(equiv(atom("P"), atom("Q")), atom("R")));
    CHECK(parse_operator("~P & ~Q") == conj({neg(atom("P")), neg(atom("Q"))}));
    CHECK(parse_operator("~(P & Q)") == neg(conj({atom("P"), atom("Q")})));
    CHECK(parse_operator("P & Q & R") == conj({atom("P"), atom("Q"), atom("R")}));
    CHECK(parse_operator("(P -> Q) -> R") ==
          implies(implies(atom("P"), atom("Q")), atom("R")));
    CHECK(parse_operator("exists y. S(y) & P(y)") ==
          exists("y", conj({pred("S", "y"), pred("P", "y")})));
    // Quantifiers bind to the end of the expression.
    CHECK(parse_operator("P & forall x. S(x) | Q") ==
          conj({atom("P"), forall("x", disj({pred("S", "x"), atom("Q")}))}));
}

TEST_CASE("constructor syntax accepts interior whitespace and newlines") {
    CHECK(parse_constructor(
              "Implies(Not(Atom(AcceptOpinions)), Not(Atom(RecognizeShortcomings)))") ==
          implies(neg(atom("AcceptOpinions")), neg(atom("RecognizeShortcomings"))));
    CHECK(parse_constructor("Atom(P)") == atom("P"));
    CHECK(parse_constructor("Implies(\n  Atom(Wise),\n  Atom(Humble)\n)") ==
          implies(atom("Wise"), atom("Humble")));
    CHECK(parse_constructor("Var(x)") == var("x"));
}

TEST_CASE("parse errors: no partial results, positions reported") {
    CHECK_THROWS_AS((void)parse_constructor("And(Atom(P))"), ParseError);
    CHECK_THROWS_AS((void)parse_constructor("Foo(Atom(P))"), ParseError);
    CHECK_THROWS_AS((void)parse_operator("P -> -> Q"), ParseError);
    CHECK_THROWS_AS((void)parse_operator("P &"), ParseError);
    CHECK_THROWS_AS((void)parse_operator(""), ParseError);
    CHECK_THROWS_AS((void)parse_operator("P Q"), ParseError);
    CHECK_THROWS_AS((void)parse_operator("forall forall. P"), ParseError);
    CHECK_THROWS_AS((void)parse_operator("S(x, y)"), ParseError);

    try {
        (void)parse_operator("P -> -> Q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
        CHECK(e.found() == "->");
    }
}

TEST_CASE("identical input yields byte-identical error messages") {
    std::string first;
    std::string second;
    try {
        (void)parse_operator("P | | Q");
    } catch (const ParseError& e) {
        first = e.what();
    }
    try {
        (void)parse_operator("P | | Q");
    } catch (const ParseError& e) {
        second = e.what();
    }
    CHECK(!first.empty());
    CHECK(first == second);
}

TEST_CASE("round-trip: parse(serialize(f)) is structurally equal, both syntaxes") {
    testing::FormulaGen gen(2024);
    for (int i = 0; i < 1000; ++i) {
        const Formula f = gen.any(6);
        CHECK(parse_operator(serialize(f, Syntax::Operator)) == f);
        CHECK(parse_constructor(serialize(f, Syntax::Constructor)) == f);
    }
}

TEST_CASE("unicode glyphs alias the ascii operators") {
    CHECK(parse_operator("¬Q → ¬P") ==
          implies(neg(atom("Q")), neg(atom("P"))));
    CHECK(parse_operator("∀x. S(x) → P(x)") ==
          forall("x", implies(pred("S", "x"), pred("P", "x"))));
    testing::FormulaGen gen(99);
    for (int i = 0; i < 200; ++i) {
        const Formula f = gen.any(5);
        const std::string ascii = serialize(f);
        CHECK(parse_operator(unicodeize(ascii)) == parse_operator(ascii));
    }
}

TEST_CASE("parse_formula dispatches on the head token") {
    CHECK(parse_formula("Implies(Atom(P), Atom(Q))") == implies(atom("P"), atom("Q")));
    CHECK(parse_formula("P -> Q") == implies(atom("P"), atom("Q")));
    CHECK(parse_formula("Implies") == atom("Implies"));
}

}  // TEST_SUITE
