/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include <map>

#include "castnorm/expr.hpp"

namespace castnorm {

// Concrete semantic value: a natural, an integer, an exact rational, or a
// truth value. Values of different kinds never compare equal.
struct Value {
    enum class Kind { nat_v, int_v, rat_v, bool_v };

    Kind kind;
    BigInt i; // nat_v, int_v
    BigRat r; // rat_v
    bool b = false;

    static Value nat(BigInt v) {
        Value out;
        out.kind = Kind::nat_v;
        out.i = std::move(v);
        return out;
    }
    static Value int_(BigInt v) {
        Value out;
        out.kind = Kind::int_v;
        out.i = std::move(v);
        return out;
    }
    static Value rat(BigRat v) {
        Value out;
        out.kind = Kind::rat_v;
        out.r = std::move(v);
        return out;
    }
    static Value boolean(bool v) {
        Value out;
        out.kind = Kind::bool_v;
        out.b = v;
        return out;
    }

    bool operator==(const Value& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::nat_v:
            case Kind::int_v: return i == o.i;
            case Kind::rat_v: return r == o.r;
            case Kind::bool_v: return b == o.b;
        }
        return false;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }

    std::string to_string() const {
        switch (kind) {
            case Kind::nat_v: return i.str() + ":nat";
            case Kind::int_v: return i.str() + ":int";
            case Kind::rat_v:
                return numerator(r).str() + "/" + denominator(r).str() + ":rat";
            case Kind::bool_v: return b ? "true" : "false";
        }
        return "?";
    }
};

using Assignment = std::map<std::string, Value>;

namespace detail {

// Natural subtraction truncates at zero.
inline BigInt nat_sub(const BigInt& x, const BigInt& y) {
    return x < y ? BigInt(0) : BigInt(x - y);
}

// Divisibility over nat/int: zero divides only zero.
inline bool int_dvd(const BigInt& x, const BigInt& y) {
    return x == 0 ? y == 0 : y % x == 0;
}

} // namespace detail

// Evaluates a closed-under-assignment expression over the builtin carriers.
// Abstract (user-declared) types have no semantics: any numeral, cast, or
// variable at one raises AbstractTypePresent; user operators raise
// UnknownUserOp.
inline Value eval(const ExprPtr& e, const Assignment& a, const TypeEnv& env) {
    switch (e->kind()) {
        case ExprKind::var: {
            const auto& v = e->as_var();
            if (v.ty.kind == TyKind::user_declared)
                throw AbstractTypePresent("variable '" + v.name + "' has abstract type '" +
                                          v.ty.name + "'");
            auto it = a.find(v.name);
            if (it == a.end()) throw Error("no value assigned to variable '" + v.name + "'");
            return it->second;
        }
        case ExprKind::num: {
            const auto& n = e->as_num();
            switch (n.ty.kind) {
                case TyKind::builtin_nat: return Value::nat(n.value);
                case TyKind::builtin_int: return Value::int_(n.value);
                case TyKind::builtin_rat: return Value::rat(BigRat(n.value));
                default:
                    throw AbstractTypePresent("numeral at abstract type '" + n.ty.name + "'");
            }
        }
        case ExprKind::cast: {
            const auto& c = e->as_cast();
            if (c.src.kind == TyKind::user_declared || c.dst.kind == TyKind::user_declared)
                throw AbstractTypePresent("cast involving abstract type '" +
                                          (c.src.kind == TyKind::user_declared ? c.src : c.dst)
                                              .name +
                                          "'");
            Value body = eval(c.body, a, env);
            switch (c.dst.kind) {
                case TyKind::builtin_int:
                    if (body.kind != Value::Kind::nat_v) break;
                    return Value::int_(body.i);
                case TyKind::builtin_rat:
                    if (body.kind == Value::Kind::nat_v || body.kind == Value::Kind::int_v)
                        return Value::rat(BigRat(body.i));
                    break;
                default: break;
            }
            throw Error("cast from '" + c.src.name + "' to '" + c.dst.name +
                        "' is not an inclusion");
        }
        case ExprKind::app: break;
    }

    const auto& app = e->as_app();
    auto builtin = builtin_op(app.op);
    if (!builtin) throw UnknownUserOp("operator '" + app.op + "' has no semantics");
    std::vector<Value> vs;
    vs.reserve(app.args.size());
    for (const auto& arg : app.args) vs.push_back(eval(arg, a, env));

    const Value& x = vs[0];
    using K = Value::Kind;
    if (app.op == "neg") {
        switch (x.kind) {
            case K::nat_v: return Value::nat(0);
            case K::int_v: return Value::int_(-x.i);
            case K::rat_v: return Value::rat(-x.r);
            default: break;
        }
        throw Error("negation applied to a truth value");
    }

    const Value& y = vs[1];
    if (x.kind != y.kind || x.kind == K::bool_v)
        throw Error("operator '" + app.op + "' applied to mismatched values");
    bool rational = x.kind == K::rat_v;

    if (app.op == "add")
        return rational ? Value::rat(x.r + y.r)
                        : (x.kind == K::nat_v ? Value::nat(x.i + y.i) : Value::int_(x.i + y.i));
    if (app.op == "sub") {
        if (rational) return Value::rat(x.r - y.r);
        if (x.kind == K::nat_v) return Value::nat(detail::nat_sub(x.i, y.i));
        return Value::int_(x.i - y.i);
    }
    if (app.op == "mul")
        return rational ? Value::rat(x.r * y.r)
                        : (x.kind == K::nat_v ? Value::nat(x.i * y.i) : Value::int_(x.i * y.i));
    if (app.op == "lt") return Value::boolean(rational ? x.r < y.r : x.i < y.i);
    if (app.op == "le") return Value::boolean(rational ? x.r <= y.r : x.i <= y.i);
    if (app.op == "eq") return Value::boolean(rational ? x.r == y.r : x.i == y.i);
    if (app.op == "ne") return Value::boolean(rational ? x.r != y.r : x.i != y.i);
    if (app.op == "dvd") {
        // Over the rationals every nonzero value divides everything.
        if (rational) return Value::boolean(x.r != 0 || y.r == 0);
        return Value::boolean(detail::int_dvd(x.i, y.i));
    }
    throw Error("operator '" + app.op + "' has no evaluation rule");
}

} // namespace castnorm
