/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "castnorm/castnorm.hpp"

using namespace castnorm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("a problem file with every section parses into its parts") {
    const char* text =
        "# goals over a declared carrier\n"
        "[decls]\n"
        "type real\n"
        "coe rat -> real\n"
        "var m : nat\n"
        "var n : nat\n"
        "var x : real\n"
        "\n"
        "[rules]\n"
        "rule cast_min : cast('T, ?a) * 1:'T = cast('T, ?a)\n"
        "\n"
        "[context]\n"
        "n <= m; m < 10:nat\n"
        "x = x\n"
        "\n"
        "[goals]\n"
        "main: cast(int, m - n) = cast(int, m) - cast(int, n)\n"
        "cast(rat, m) < cast(rat, n)\n";

    Problem prob = parse_problem(text, "demo.prob");

    SECTION("declarations land in the type environment") {
        REQUIRE(prob.env.var_type("m") == ty_nat());
        REQUIRE(prob.env.var_type("x") == Ty{"real"});
        REQUIRE(prob.env.coercion_exists(ty_rat(), Ty{"real"}));
        REQUIRE(prob.env.coercion_exists(ty_nat(), Ty{"real"}));
    }
    SECTION("rule lines are kept verbatim with their line numbers") {
        REQUIRE(prob.rule_lines.size() == 1);
        REQUIRE(prob.rule_lines[0].first == 10);
        REQUIRE(prob.rule_lines[0].second ==
                "rule cast_min : cast('T, ?a) * 1:'T = cast('T, ?a)");
    }
    SECTION("hypotheses split on semicolons and newlines alike") {
        REQUIRE(prob.ctx.hyps.size() == 3);
        REQUIRE(pretty(prob.ctx.hyps[0]) == "n <= m");
        REQUIRE(pretty(prob.ctx.hyps[1]) == "m < 10:nat");
        REQUIRE(pretty(prob.ctx.hyps[2]) == "x = x");
    }
    SECTION("goals keep declaration order and optional names") {
        REQUIRE(prob.goals.size() == 2);
        REQUIRE(prob.goals[0].first == "main");
        REQUIRE(pretty(prob.goals[0].second) ==
                "cast(int, m - n) = cast(int, m) - cast(int, n)");
        REQUIRE_FALSE(prob.goals[1].first.has_value());
    }
}

TEST_CASE("every section except goals is optional") {
    Problem prob = parse_problem("[goals]\n1:nat <= 2:nat\n");
    REQUIRE(prob.goals.size() == 1);
    REQUIRE(prob.ctx.hyps.empty());
    REQUIRE(prob.rule_lines.empty());

    Problem empty = parse_problem("# nothing but comments\n\n");
    REQUIRE(empty.goals.empty());
}

TEST_CASE("malformed problem files are rejected with positions") {
    SECTION("content before the first section header") {
        REQUIRE_THROWS_WITH(parse_problem("var m : nat\n"),
                            Catch::Matchers::ContainsSubstring(
                                "content before the first section header"));
    }
    SECTION("unknown section") {
        REQUIRE_THROWS_WITH(parse_problem("[lemmas]\n"),
                            Catch::Matchers::ContainsSubstring("unknown section '[lemmas]'"));
    }
    SECTION("sections out of order") {
        REQUIRE_THROWS_WITH(
            parse_problem("[goals]\n1:nat <= 2:nat\n[decls]\nvar m : nat\n"),
            Catch::Matchers::ContainsSubstring("out of order"));
    }
    SECTION("duplicate section") {
        REQUIRE_THROWS_WITH(parse_problem("[decls]\nvar m : nat\n[decls]\nvar n : nat\n"),
                            Catch::Matchers::ContainsSubstring("out of order"));
    }
    SECTION("malformed header") {
        REQUIRE_THROWS_WITH(parse_problem("[decls extra]\n"),
                            Catch::Matchers::ContainsSubstring("malformed section header"));
    }
    SECTION("a hypothesis must be a proposition") {
        REQUIRE_THROWS_WITH(
            parse_problem("[decls]\nvar m : nat\n[context]\nm + m\n[goals]\nm = m\n"),
            Catch::Matchers::ContainsSubstring("context hypothesis must be a proposition"));
    }
    SECTION("duplicate goal names") {
        REQUIRE_THROWS_WITH(
            parse_problem("[goals]\ng: 1:nat <= 2:nat\ng: 2:nat <= 3:nat\n"),
            Catch::Matchers::ContainsSubstring("duplicate goal name 'g'"));
    }
    SECTION("errors carry the file name and line") {
        try {
            parse_problem("[decls]\nvar m :\n", "broken.prob");
            FAIL("expected a parse error");
        } catch (const ParseError& ex) {
            REQUIRE(ex.file == "broken.prob");
            REQUIRE(ex.line == 2);
        }
    }
}

TEST_CASE("the shipped problem files parse and normalize cleanly") {
    const std::string dir = std::string(CASTNORM_SOURCE_DIR) + "/testdata/";
    const char* files[] = {"add_lt.prob",   "mixed_split.prob",    "equiv_sub_lt.prob",
                           "equiv_abstract.prob", "cond_sub.prob", "cond_sub_empty.prob",
                           "hyp_match.prob", "loop.prob"};
    for (const char* f : files) {
        INFO(f);
        Problem prob = parse_problem(slurp(dir + f), f);
        REQUIRE_FALSE(prob.goals.empty());
        RuleDb db = stdlib_rule_db(prob.env);
        for (const auto& [lineno, line] : prob.rule_lines) {
            ParsedRule parsed = parse_rule_line(line, prob.env, f, lineno);
            db.add(finish_rule(parsed, prob.env, f, nullptr));
        }
        for (const auto& [name, goal] : prob.goals) {
            auto [out, tr] = normalize(goal, db, prob.ctx, prob.env);
            REQUIRE(trace_replays(tr));
        }
    }
}
