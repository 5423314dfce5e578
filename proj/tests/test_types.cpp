/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <catch2/catch_amalgamated.hpp>

#include "castnorm/types.hpp"

using namespace castnorm;

TEST_CASE("builtin types and operators are predeclared") {
    TypeEnv env;
    REQUIRE(env.lookup_type("nat") == ty_nat());
    REQUIRE(env.lookup_type("int") == ty_int());
    REQUIRE(env.lookup_type("rat") == ty_rat());
    REQUIRE(env.lookup_type("prop") == ty_prop());
    REQUIRE_THROWS_AS(env.lookup_type("real"), Error);

    auto add = builtin_op("add");
    REQUIRE(add);
    REQUIRE(add->arity == 2);
    REQUIRE_FALSE(add->is_rel);
    auto neg = builtin_op("neg");
    REQUIRE(neg);
    REQUIRE(neg->arity == 1);
    auto lt = builtin_op("lt");
    REQUIRE(lt);
    REQUIRE(lt->is_rel);
    REQUIRE(builtin_op("dvd")->is_rel);
    REQUIRE_FALSE(builtin_op("pow"));
}

TEST_CASE("the default coercion graph is the nat-int-rat chain") {
    TypeEnv env;
    REQUIRE(env.coercion_exists(ty_nat(), ty_int()));
    REQUIRE(env.coercion_exists(ty_int(), ty_rat()));

    SECTION("reachability is transitive") {
        REQUIRE(env.coercion_exists(ty_nat(), ty_rat()));
    }
    SECTION("reachability is directed") {
        REQUIRE_FALSE(env.coercion_exists(ty_int(), ty_nat()));
        REQUIRE_FALSE(env.coercion_exists(ty_rat(), ty_nat()));
        REQUIRE_FALSE(env.coercion_exists(ty_rat(), ty_int()));
    }
    SECTION("a type never coerces to itself") {
        REQUIRE_FALSE(env.coercion_exists(ty_nat(), ty_nat()));
        REQUIRE_FALSE(env.coercion_exists(ty_rat(), ty_rat()));
    }
}

TEST_CASE("a diamond of coercions does not connect its sides") {
    CoercionGraph g;
    Ty nat = ty_nat(), intt = ty_int();
    Ty alpha{"alpha", TyKind::user_declared};
    g.add_edge(nat, alpha);
    g.add_edge(intt, alpha);
    REQUIRE(g.exists(nat, alpha));
    REQUIRE(g.exists(intt, alpha));
    REQUIRE_FALSE(g.exists(nat, intt));
    REQUIRE_FALSE(g.exists(alpha, nat));
}

TEST_CASE("coercion edges that would break the order are rejected") {
    TypeEnv env;
    SECTION("self edge") {
        REQUIRE_THROWS_AS(env.graph().add_edge(ty_nat(), ty_nat()), InvalidCast);
    }
    SECTION("cycle through existing edges") {
        REQUIRE_THROWS_AS(env.graph().add_edge(ty_int(), ty_nat()), InvalidCast);
        REQUIRE_THROWS_AS(env.graph().add_edge(ty_rat(), ty_nat()), InvalidCast);
    }
    SECTION("prop is not a carrier") {
        REQUIRE_THROWS_AS(env.graph().add_edge(ty_prop(), ty_int()), InvalidCast);
        REQUIRE_THROWS_AS(env.graph().add_edge(ty_int(), ty_prop()), InvalidCast);
    }
}

TEST_CASE("user declarations are checked for duplicates and reserved names") {
    TypeEnv env;
    env.declare_type("alpha");
    REQUIRE(env.has_type("alpha"));
    REQUIRE(env.lookup_type("alpha").kind == TyKind::user_declared);
    REQUIRE_THROWS_AS(env.declare_type("alpha"), DuplicateName);
    REQUIRE_THROWS_AS(env.declare_type("nat"), DuplicateName);
    REQUIRE_THROWS_AS(env.declare_type("cast"), Error);

    env.declare_coe("nat", "alpha");
    REQUIRE(env.coercion_exists(ty_nat(), env.lookup_type("alpha")));
    REQUIRE_THROWS_AS(env.declare_coe("beta", "alpha"), Error);

    env.declare_op("f", 2, false);
    REQUIRE(env.op_decl("f")->arity == 2);
    REQUIRE_THROWS_AS(env.declare_op("f", 1, false), DuplicateName);
    REQUIRE_THROWS_AS(env.declare_op("add", 2, false), DuplicateName);
    REQUIRE_THROWS_AS(env.declare_op("g", 0, false), Error);
    REQUIRE_THROWS_AS(env.declare_op("dvd", 2, true), DuplicateName);

    env.declare_var("x", "alpha");
    REQUIRE(env.var_type("x") == env.lookup_type("alpha"));
    REQUIRE_FALSE(env.var_type("y"));
    REQUIRE_THROWS_AS(env.declare_var("x", "nat"), DuplicateName);
    REQUIRE_THROWS_AS(env.declare_var("p", "prop"), Error);
    REQUIRE_THROWS_AS(env.declare_var("cast", "nat"), Error);
}

TEST_CASE("op_decl resolves builtins before user operators") {
    TypeEnv env;
    REQUIRE(env.op_decl("mul"));
    REQUIRE_FALSE(env.op_decl("shift"));
    env.declare_op("shift", 1, false);
    REQUIRE(env.op_decl("shift"));
}
