/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <catch2/catch_amalgamated.hpp>

#include "castnorm/parser.hpp"
#include "testutil.hpp"

using namespace castnorm;

namespace {

TypeEnv rich_env() {
    TypeEnv env;
    env.declare_var("m", "nat");
    env.declare_var("n", "nat");
    env.declare_var("z", "int");
    env.declare_var("q", "rat");
    env.declare_op("f", 2, false);
    return env;
}

std::string roundtrip(const char* text, const TypeEnv& env) {
    return pretty(parse_expr_string(text, env));
}

} // namespace

TEST_CASE("pretty printing uses minimal parentheses") {
    TypeEnv env = rich_env();
    REQUIRE(roundtrip("cast(int, m)", env) == "cast(int, m)");
    REQUIRE(roundtrip("m + n < 10:nat", env) == "m + n < 10:nat");
    REQUIRE(roundtrip("-(3:int)", env) == "-(3:int)");
    REQUIRE(roundtrip("-z", env) == "-z");
    REQUIRE(roundtrip("m + n * m", env) == "m + n * m");
    REQUIRE(roundtrip("(m + n) * m", env) == "(m + n) * m");
    REQUIRE(roundtrip("m - n - m", env) == "m - n - m");
    REQUIRE(roundtrip("m - (n - m)", env) == "m - (n - m)");
    REQUIRE(roundtrip("-cast(int, m)", env) == "-cast(int, m)");
    REQUIRE(roundtrip("-(z + z)", env) == "-(z + z)");
    REQUIRE(roundtrip("f(m, n)", env) == "f(m, n)");
    REQUIRE(roundtrip("f(m, n) * m", env) == "f(m, n) * m");
    REQUIRE(roundtrip("z dvd z", env) == "z dvd z");
    REQUIRE(roundtrip("cast(rat, z + -z)", env) == "cast(rat, z + -z)");
}

TEST_CASE("parsing a pretty-printed expression gives back the same tree") {
    TypeEnv env = castnorm::testing::pool_env();
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        ExprPtr e = castnorm::testing::random_expr(rng);
        ExprPtr back = parse_expr_string(pretty(e), env);
        INFO(pretty(e));
        REQUIRE(equal(e, back));
    }
}

TEST_CASE("numerals carry a mandatory type annotation") {
    TypeEnv env = rich_env();
    ExprPtr e = parse_expr_string("10:int", env);
    REQUIRE(e->is_num());
    REQUIRE(e->as_num().value == 10);
    REQUIRE(e->as_num().ty == ty_int());
    REQUIRE_THROWS_AS(parse_expr_string("10", env), ParseError);
    REQUIRE_THROWS_AS(parse_expr_string("10:prop", env), ParseError);
    REQUIRE_THROWS_AS(parse_expr_string("10:real", env), ParseError);
}

TEST_CASE("cast syntax accepts an optional source annotation") {
    TypeEnv env = rich_env();
    ExprPtr plain = parse_expr_string("cast(int, m)", env);
    REQUIRE(plain->is_cast());
    REQUIRE(plain->as_cast().src == ty_nat());
    REQUIRE(plain->as_cast().dst == ty_int());

    ExprPtr annotated = parse_expr_string("cast(nat -> int, m)", env);
    REQUIRE(equal(plain, annotated));

    SECTION("a wrong source annotation is a parse error") {
        REQUIRE_THROWS_AS(parse_expr_string("cast(int -> rat, m)", env), ParseError);
    }
    SECTION("casting to the body type is rejected") {
        REQUIRE_THROWS_AS(parse_expr_string("cast(nat, m)", env), ParseError);
    }
    SECTION("casting against the coercion order is rejected") {
        REQUIRE_THROWS_AS(parse_expr_string("cast(nat, z)", env), ParseError);
    }
}

TEST_CASE("parse errors carry file, line, and column") {
    TypeEnv env = rich_env();
    try {
        parse_expr_string("m + ", env, "probe.txt");
        FAIL("expected a parse error");
    } catch (const ParseError& ex) {
        REQUIRE(ex.file == "probe.txt");
        REQUIRE(ex.line == 1);
        REQUIRE(ex.col == 5);
        REQUIRE(std::string(ex.what()).find("probe.txt:1:5: ") == 0);
    }

    SECTION("unknown character") {
        REQUIRE_THROWS_AS(parse_expr_string("m & n", env), ParseError);
    }
    SECTION("bare exclamation mark") {
        REQUIRE_THROWS_AS(parse_expr_string("m ! n", env), ParseError);
    }
    SECTION("undeclared variable") {
        REQUIRE_THROWS_WITH(parse_expr_string("m + w", env),
                            Catch::Matchers::ContainsSubstring("undeclared variable"));
    }
    SECTION("metas are rejected outside rule patterns") {
        REQUIRE_THROWS_AS(parse_expr_string("?a + m", env), ParseError);
        REQUIRE_THROWS_AS(parse_expr_string("cast('T, m)", env), ParseError);
    }
    SECTION("trailing input") {
        REQUIRE_THROWS_AS(parse_expr_string("m n", env), ParseError);
    }
    SECTION("wrong call arity") {
        REQUIRE_THROWS_AS(parse_expr_string("f(m)", env), ParseError);
    }
    SECTION("call of an undeclared operator") {
        REQUIRE_THROWS_AS(parse_expr_string("g(m)", env), ParseError);
    }
}

TEST_CASE("declaration lines extend the environment") {
    TypeEnv env;
    parse_decl_line("type real", env, "d", 1);
    REQUIRE(env.has_type("real"));
    parse_decl_line("coe rat -> real", env, "d", 2);
    REQUIRE(env.coercion_exists(ty_rat(), env.lookup_type("real")));
    REQUIRE(env.coercion_exists(ty_nat(), env.lookup_type("real")));
    parse_decl_line("op sq 1 fun", env, "d", 3);
    REQUIRE(env.op_decl("sq")->arity == 1);
    parse_decl_line("op near 2 rel", env, "d", 4);
    REQUIRE(env.op_decl("near")->is_rel);
    parse_decl_line("var x : real", env, "d", 5);
    REQUIRE(env.var_type("x") == env.lookup_type("real"));

    SECTION("bad declarations are parse errors with position") {
        REQUIRE_THROWS_AS(parse_decl_line("type real", env, "d", 6), ParseError);
        REQUIRE_THROWS_AS(parse_decl_line("frob x", env, "d", 7), ParseError);
        REQUIRE_THROWS_AS(parse_decl_line("op h 0 fun", env, "d", 8), ParseError);
        REQUIRE_THROWS_AS(parse_decl_line("var y : prop", env, "d", 9), ParseError);
        REQUIRE_THROWS_AS(parse_decl_line("coe real -> rat", env, "d", 10), ParseError);
        REQUIRE_THROWS_AS(parse_decl_line("var z", env, "d", 11), ParseError);
    }
}

TEST_CASE("comments and blank lines tokenize to nothing") {
    auto toks = tokenize_line("   # just a comment", "f", 1);
    REQUIRE(toks.size() == 1);
    REQUIRE(toks[0].kind == TokKind::end);
    auto toks2 = tokenize_line("m + n # trailing", "f", 1);
    REQUIRE(toks2.size() == 4);
    REQUIRE(toks2[3].kind == TokKind::end);
}
