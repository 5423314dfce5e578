/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <catch2/catch_amalgamated.hpp>

#include "castnorm/expr.hpp"
#include "castnorm/parser.hpp"
#include "testutil.hpp"

using namespace castnorm;

namespace {

TypeEnv two_nats() {
    TypeEnv env;
    env.declare_var("m", "nat");
    env.declare_var("n", "nat");
    return env;
}

} // namespace

TEST_CASE("type_of follows operators, casts, and relations") {
    TypeEnv env = two_nats();
    env.declare_var("z", "int");

    REQUIRE(type_of(parse_expr_string("m + n", env), env) == ty_nat());
    REQUIRE(type_of(parse_expr_string("cast(int, m)", env), env) == ty_int());
    REQUIRE(type_of(parse_expr_string("cast(rat, z) * cast(rat, z)", env), env) == ty_rat());
    REQUIRE(type_of(parse_expr_string("cast(int, m) + cast(int, n) < 10:int", env), env) ==
            ty_prop());
    REQUIRE(type_of(parse_expr_string("-z", env), env) == ty_int());
    REQUIRE(type_of(parse_expr_string("m dvd n", env), env) == ty_prop());
}

TEST_CASE("type_of rejects ill-formed expressions") {
    TypeEnv env = two_nats();
    env.declare_var("z", "int");

    SECTION("unknown variable") {
        REQUIRE_THROWS_AS(type_of(mk_var("w", ty_nat()), env), UndeclaredVariable);
    }
    SECTION("variable annotated with the wrong type") {
        REQUIRE_THROWS_AS(type_of(mk_var("m", ty_int()), env), UndeclaredVariable);
    }
    SECTION("operands of different types") {
        ExprPtr bad = mk_app("add", {mk_var("m", ty_nat()), mk_var("z", ty_int())});
        REQUIRE_THROWS_AS(type_of(bad, env), IllTypedApplication);
    }
    SECTION("wrong arity") {
        ExprPtr bad = mk_app("add", {mk_var("m", ty_nat())});
        REQUIRE_THROWS_AS(type_of(bad, env), IllTypedApplication);
    }
    SECTION("unknown operator") {
        ExprPtr bad = mk_app("pow", {mk_var("m", ty_nat()), mk_var("m", ty_nat())});
        REQUIRE_THROWS_AS(type_of(bad, env), IllTypedApplication);
    }
    SECTION("proposition used as an operand") {
        ExprPtr rel = mk_app("lt", {mk_var("m", ty_nat()), mk_var("n", ty_nat())});
        ExprPtr bad = mk_app("eq", {rel, rel});
        REQUIRE_THROWS_AS(type_of(bad, env), IllTypedApplication);
    }
    SECTION("numeral at prop") {
        REQUIRE_THROWS_AS(type_of(mk_num(1, ty_prop()), env), IllTypedApplication);
    }
    SECTION("cast whose body has a different type than its source") {
        ExprPtr bad = mk_cast(ty_int(), ty_rat(), mk_var("m", ty_nat()));
        REQUIRE_THROWS_AS(type_of(bad, env), InvalidCast);
    }
    SECTION("cast without a coercion path") {
        ExprPtr bad = mk_cast(ty_int(), ty_nat(), mk_var("z", ty_int()));
        REQUIRE_THROWS_AS(type_of(bad, env), InvalidCast);
    }
    SECTION("cast endpoints may not coincide") {
        REQUIRE_THROWS_AS(mk_cast(ty_nat(), ty_nat(), mk_var("m", ty_nat())), InvalidCast);
    }
    SECTION("negative numerals cannot be built") {
        REQUIRE_THROWS_AS(mk_num(BigInt(-1), ty_int()), Error);
    }
}

TEST_CASE("cast counting separates the head chain from inner casts") {
    TypeEnv env = two_nats();
    env.declare_var("z", "int");

    auto counts = [&](const char* text) { return count_casts(parse_expr_string(text, env)); };

    CastCounts c1 = counts("cast(rat, cast(int, m))");
    REQUIRE(c1.hc == 2);
    REQUIRE(c1.ic == 0);

    CastCounts c2 = counts("cast(int, m) + cast(int, n)");
    REQUIRE(c2.hc == 0);
    REQUIRE(c2.ic == 2);

    CastCounts c3 = counts("cast(int, m + n)");
    REQUIRE(c3.hc == 1);
    REQUIRE(c3.ic == 0);

    CastCounts c4 = counts("cast(rat, cast(int, m) + z)");
    REQUIRE(c4.hc == 1);
    REQUIRE(c4.ic == 1);

    CastCounts c5 = counts("m + n");
    REQUIRE(c5.hc == 0);
    REQUIRE(c5.ic == 0);
}

TEST_CASE("head plus inner casts always equal the total") {
    std::mt19937 rng(7);
    TypeEnv env = castnorm::testing::pool_env();
    for (int i = 0; i < 200; ++i) {
        ExprPtr e = castnorm::testing::random_expr(rng);
        CastCounts c = count_casts(e);
        REQUIRE(c.hc + c.ic == total_casts(e));
        REQUIRE(c.hc >= 0);
        REQUIRE(c.ic >= 0);
    }
}

TEST_CASE("paths address subterms and replacement rebuilds around them") {
    TypeEnv env = two_nats();
    ExprPtr e = parse_expr_string("cast(int, m) + cast(int, n) < 10:int", env);

    REQUIRE(equal(subterm_at(e, {}), e));
    REQUIRE(pretty(subterm_at(e, {0})) == "cast(int, m) + cast(int, n)");
    REQUIRE(pretty(subterm_at(e, {0, 1})) == "cast(int, n)");
    REQUIRE(pretty(subterm_at(e, {0, 1, 0})) == "n");
    REQUIRE(pretty(subterm_at(e, {1})) == "10:int");
    REQUIRE_THROWS_AS(subterm_at(e, {2}), Error);
    REQUIRE_THROWS_AS(subterm_at(e, {1, 0}), Error);

    ExprPtr swapped = replace_at(e, {0, 1, 0}, mk_var("m", ty_nat()));
    REQUIRE(pretty(swapped) == "cast(int, m) + cast(int, m) < 10:int");
    REQUIRE(pretty(e) == "cast(int, m) + cast(int, n) < 10:int");

    ExprPtr whole = replace_at(e, {}, mk_var("m", ty_nat()));
    REQUIRE(pretty(whole) == "m");
}

TEST_CASE("structural equality ignores sharing") {
    TypeEnv env = two_nats();
    ExprPtr a = parse_expr_string("cast(int, m + n)", env);
    ExprPtr b = parse_expr_string("cast(int, m + n)", env);
    REQUIRE(equal(a, b));
    REQUIRE(equal(a, a));
    REQUIRE_FALSE(equal(a, parse_expr_string("cast(int, n + m)", env)));
    REQUIRE_FALSE(equal(parse_expr_string("10:int", env), parse_expr_string("10:nat", env)));
    REQUIRE_FALSE(equal(parse_expr_string("10:int", env), parse_expr_string("11:int", env)));
}

TEST_CASE("free variables and user-operator occurrence are computed") {
    TypeEnv env = two_nats();
    env.declare_op("f", 1, false);
    ExprPtr e = parse_expr_string("cast(int, m) + cast(int, f(n))", env);
    auto fv = free_vars(e);
    REQUIRE(fv == std::set<std::string>{"m", "n"});
    REQUIRE(contains_user_op(e));
    REQUIRE_FALSE(contains_user_op(parse_expr_string("m + n", env)));
}
